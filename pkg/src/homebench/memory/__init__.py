from .embedding import EmbeddingProvider, HashingEmbedding, cosine, embed_record
from .spatial import EmptyMemoryError, MemoryObject, SpatialMemory, ViewRecord
from .episodic import EpisodicMemory, ExperienceRule, SEED_RULES
from .verify import RuleBasedVerifier

__all__ = [
    "EmbeddingProvider",
    "HashingEmbedding",
    "cosine",
    "embed_record",
    "EmptyMemoryError",
    "MemoryObject",
    "SpatialMemory",
    "ViewRecord",
    "EpisodicMemory",
    "ExperienceRule",
    "SEED_RULES",
    "RuleBasedVerifier",
]

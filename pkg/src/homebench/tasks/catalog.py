"""Object catalog: categories, footprints, affordances, room assignments.

Furniture footprints are (width-along-wall, depth) in lattice cells.
Small objects always start inside or on a receptacle.
"""

from __future__ import annotations

COLORS = ("red", "blue", "green", "white", "black", "yellow")

# category -> (width, depth, affordances)
FURNITURE = {
    "countertop": (24, 10, ("receptacle", "flat-surface")),
    "sink": (12, 10, ("receptacle", "toggleable")),
    "stove": (14, 10, ("receptacle", "toggleable")),
    "fridge": (12, 12, ("receptacle", "openable")),
    "cabinet": (16, 10, ("receptacle", "openable")),
    "drawer": (10, 8, ("receptacle", "openable")),
    "dining_table": (20, 14, ("receptacle", "flat-surface")),
    "sofa": (26, 12, ("receptacle", "flat-surface")),
    "coffee_table": (16, 10, ("receptacle", "flat-surface")),
    "tv_stand": (18, 8, ("receptacle", "flat-surface")),
    "bookshelf": (16, 8, ("receptacle",)),
    "box": (8, 8, ("receptacle", "openable")),
    "bed": (28, 18, ("receptacle", "flat-surface")),
    "nightstand": (8, 8, ("receptacle", "flat-surface")),
    "dresser": (16, 10, ("receptacle", "openable")),
    "desk": (20, 10, ("receptacle", "flat-surface")),
    "floor_lamp": (4, 4, ("toggleable",)),
}

# Fixed appliances that sit on a named piece of furniture instead of the floor.
MOUNTED = {
    "tv": ("tv_stand", 6, ("toggleable",)),
    "desk_lamp": ("desk", 2, ("toggleable",)),
    "microwave": ("countertop", 4, ("receptacle", "openable", "toggleable")),
}

# category -> (size, affordances, colorable)
SMALLS = {
    "mug": (1, ("pickupable", "fillable"), True),
    "cup": (1, ("pickupable", "fillable"), True),
    "bottle": (1, ("pickupable", "fillable"), False),
    "bowl": (1, ("pickupable", "fillable"), True),
    "plate": (1, ("pickupable",), True),
    "fork": (1, ("pickupable",), False),
    "spoon": (1, ("pickupable",), False),
    "knife": (1, ("pickupable",), False),
    "apple": (1, ("pickupable", "sliceable"), False),
    "bread": (2, ("pickupable", "sliceable"), False),
    "tomato": (1, ("pickupable", "sliceable", "cookable"), False),
    "potato": (1, ("pickupable", "sliceable", "cookable"), False),
    "egg": (1, ("pickupable", "cookable"), False),
    "pot": (2, ("pickupable", "fillable"), False),
    "pan": (2, ("pickupable",), False),
    "book": (2, ("pickupable",), True),
    "notebook": (1, ("pickupable",), True),
    "pen": (1, ("pickupable",), True),
    "pencil": (1, ("pickupable",), False),
    "laptop": (2, ("pickupable",), False),
    "remote": (1, ("pickupable",), False),
    "pillow": (3, ("pickupable",), True),
    "toy": (1, ("pickupable",), True),
}

ROOM_FURNITURE = {
    "kitchen": {
        "required": ("countertop", "sink", "stove", "fridge", "cabinet"),
        "optional": ("drawer", "dining_table"),
    },
    "living_room": {
        "required": ("sofa", "coffee_table", "tv_stand", "floor_lamp"),
        "optional": ("bookshelf", "box"),
    },
    "bedroom": {
        "required": ("bed", "nightstand", "dresser"),
        "optional": ("bookshelf",),
    },
    "study": {
        "required": ("desk", "drawer", "bookshelf"),
        "optional": ("floor_lamp",),
    },
}

ROOM_MOUNTED = {
    "kitchen": ("microwave",),
    "living_room": ("tv",),
    "study": ("desk_lamp",),
    "bedroom": (),
}

ROOM_SMALLS = {
    "kitchen": ("mug", "cup", "plate", "bowl", "fork", "spoon", "apple", "bread",
                "tomato", "potato", "egg", "pot", "pan", "bottle"),
    "living_room": ("book", "remote", "pillow", "toy", "notebook"),
    "bedroom": ("book", "pillow", "toy"),
    "study": ("book", "pen", "pencil", "notebook", "laptop"),
}

# Categories that must exist somewhere for task templates to stay applicable.
GUARANTEED = {
    "kitchen": ("knife", "bread", "potato", "mug", "cup", "plate"),
    "living_room": ("remote", "pillow", "book"),
    "bedroom": ("book",),
    "study": ("laptop", "pen", "notebook"),
}

"""Independent nested-loop answer computation used as the test oracle.

Deliberately written from scratch against the domain rules, with its own
property tables and no imports from the package's query code, so that
agreement with the package is a real cross-check and not a tautology.
"""

REF_CATEGORY = {
    "donut": "dessert",
    "coke-can": "drink",
    "coke-bottle": "drink",
    "beer": "drink",
    "apple": "fruit",
    "banana": "fruit",
    "lemon": "fruit",
    "orange": "fruit",
    "pear": "fruit",
    "tomato": "vegetable",
    "egg": "ingredient",
    "meat": "ingredient",
    "milk": "ingredient",
    "fish": "ingredient",
}

REF_PERISHABLE = ("apple", "banana", "meat")


def ref_matches(obj_class, obj_size, obj_freshness, size, freshness, category, klass):
    """One object against one filter combination, every check spelled out."""
    if size is not None:
        if obj_size != size:
            return False
    if freshness is not None:
        if obj_freshness != freshness:
            return False
    if category is not None:
        if REF_CATEGORY[obj_class] != category:
            return False
    if klass is not None:
        if obj_class != klass:
            return False
    return True


def ref_answer(head, size, freshness, category, klass, objects):
    """Count by plain iteration; returns ("yesno", bool) or ("number", int).

    ``objects`` is a list of (class, size, freshness) string triples.
    """
    count = 0
    for obj_class, obj_size, obj_freshness in objects:
        if ref_matches(obj_class, obj_size, obj_freshness, size, freshness, category, klass):
            count += 1
    if head == "count":
        return ("number", count)
    return ("yesno", count > 0)


def ref_relationships(positions):
    """Brute-force spatial relations from (x, y) centers, id = list index."""
    n = len(positions)
    rel = {
        "left-of": {i: [] for i in range(n)},
        "right-of": {i: [] for i in range(n)},
        "in-front-of": {i: [] for i in range(n)},
        "behind": {i: [] for i in range(n)},
    }
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            ax, ay = positions[a]
            bx, by = positions[b]
            if ax < bx:
                rel["left-of"][a].append(b)
            if ax > bx:
                rel["right-of"][a].append(b)
            if ay < by:
                rel["in-front-of"][a].append(b)
            if ay > by:
                rel["behind"][a].append(b)
    return rel

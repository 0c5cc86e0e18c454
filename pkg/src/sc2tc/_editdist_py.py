"""Pure-Python Levenshtein kernels, the fallback for ``_editdist``."""


def edit_distance(a: str, b: str) -> int:
    """Character Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def total_edit_distance(predictions: list, references: list) -> int:
    if len(predictions) != len(references):
        raise ValueError("length mismatch")
    return sum(edit_distance(p, r) for p, r in zip(predictions, references))

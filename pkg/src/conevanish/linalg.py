"""Exact sparse Gaussian elimination over Q or F_p."""

from __future__ import annotations


def rank(rows, p: int) -> int:
    """Rank of a matrix given as an iterable of ``{column key: value}`` rows."""
    pivots: dict = {}
    r = 0
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                c = row[col]
                if p:
                    inv = pow(c, -1, p)
                    row = {k: v * inv % p for k, v in row.items()}
                else:
                    row = {k: v / c for k, v in row.items()}
                pivots[col] = row
                r += 1
                break
            c = row[col]
            for k, v in piv.items():
                nv = row.get(k, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return r

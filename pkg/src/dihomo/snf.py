"""Smith normal form over the integers, with unimodular certificates."""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss elimination)."""
    m = [list(row) for row in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def smith_normal_form(a: Sequence[Sequence[int]], certificates: bool = True) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ a @ V == D``.

    ``D`` is diagonal with nonnegative entries, each dividing the next; ``U``
    and ``V`` are unimodular. With ``certificates=False`` the returned ``U``
    and ``V`` are empty lists, which saves most of the work on large inputs.
    """
    d = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    u = identity(m) if certificates else []
    v = identity(n) if certificates else []

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        if certificates:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        if certificates:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, q: int) -> None:
        # row[dst] += q * row[src]
        rs, rd = d[src], d[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if certificates:
            us, ud = u[src], u[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(src: int, dst: int, q: int) -> None:
        for row in d:
            if row[src]:
                row[dst] += q * row[src]
        if certificates:
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]

    def negate_row(i: int) -> None:
        d[i] = [-x for x in d[i]]
        if certificates:
            u[i] = [-x for x in u[i]]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(d[i][t]), i, t) for i in range(t, m) if d[i][t]]
                cands += [(abs(d[t][j]), t, j) for j in range(t, n) if d[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            p = d[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            negate_row(t)
    return d, u, v


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    d, _, _ = smith_normal_form(a, certificates=False)
    out = []
    for k in range(min(len(d), len(d[0]) if d else 0)):
        if d[k][k] == 0:
            break
        out.append(d[k][k])
    return out


def rank(a: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(a))

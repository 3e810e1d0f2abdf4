"""Integer lattices in Hermite normal form.

Rows are plain lists of Python ints, so entries never overflow.
"""

from fractions import Fraction
from math import lcm


def hermite_normal_form(rows):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows are dropped, so two generating sets span the same lattice iff their
    forms are equal.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    pr = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(pr, len(A)) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[pr], A[piv] = A[piv], A[pr]
            done = True
            for i in range(pr + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // A[pr][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[pr])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if pr >= len(A) or A[pr][col] == 0:
            continue
        if A[pr][col] < 0:
            A[pr] = [-x for x in A[pr]]
        p = A[pr][col]
        for k in range(pr):
            q = A[k][col] // p
            if q:
                A[k] = [x - q * y for x, y in zip(A[k], A[pr])]
        pr += 1
        if pr == len(A):
            break
    return [r for r in A[:pr]]


def _pivot(row):
    for j, x in enumerate(row):
        if x:
            return j
    return None


def lattice_contains(hnf, vec):
    """True if the integer vector lies in the lattice given by ``hnf``."""
    v = list(vec)
    for row in hnf:
        c = _pivot(row)
        if any(v[:c]):
            return False
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def integerize(*vector_sets):
    """Scale rational vectors by one common denominator.

    Returns one list of integer vectors per input set; the common scale keeps
    inclusion relations between the sets intact.
    """
    den = 1
    for vs in vector_sets:
        for v in vs:
            for x in v:
                den = lcm(den, Fraction(x).denominator)
    out = []
    for vs in vector_sets:
        out.append([[int(Fraction(x) * den) for x in v] for v in vs])
    return out


def compare_lattices(gens_p, gens_q):
    """Compare the groups generated by two sets of rational vectors.

    Returns one of ``"Equal"``, ``"PSubsetOfQ"``, ``"QSubsetOfP"``,
    ``"Incomparable"``.
    """
    ip, iq = integerize(gens_p, gens_q)
    hp = hermite_normal_form(ip)
    hq = hermite_normal_form(iq)
    if hp == hq:
        return "Equal"
    p_in_q = all(lattice_contains(hq, v) for v in hp)
    q_in_p = all(lattice_contains(hp, v) for v in hq)
    if p_in_q and q_in_p:
        # unreachable for a canonical form, kept as a guard
        return "Equal"
    if p_in_q:
        return "PSubsetOfQ"
    if q_in_p:
        return "QSubsetOfP"
    return "Incomparable"

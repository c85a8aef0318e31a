"""Generate the nested Genz-Keister (Kronrod-Patterson-Normal) rule table.

Builds the 1-3-9-19-35 node sequence by successive Patterson extensions of
the single-node rule {0} with respect to the standard Gaussian measure,
using mpmath at 200 digits, and writes the table in full double precision
to src/sgcol/_gk_table.txt.

Record format (one per level): first line ``cardinality exactness_degree``,
then one ``node weight`` pair per line.
"""

import os

import mpmath as mp

mp.mp.dps = 200

EXTENSIONS = (2, 6, 10, 16)  # known feasible extension sizes for KPN


def gauss_moment(j):
    if j % 2:
        return mp.mpf(0)
    return mp.fac2(j - 1) if j > 0 else mp.mpf(1)


def poly_from_roots(roots):
    coeffs = [mp.mpf(1)]
    for r in roots:
        new = [mp.mpf(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i] += c
            new[i + 1] -= c * r
        coeffs = new
    return coeffs


def patterson_extension(nodes, m):
    """New nodes extending `nodes` so the combined rule has maximal degree."""
    W = poly_from_roots(nodes)
    deg = len(W) - 1

    def wmom(j):
        return sum(c * gauss_moment(deg - i + j) for i, c in enumerate(W))

    A = mp.matrix(m, m)
    b = mp.matrix(m, 1)
    for j in range(m):
        for l in range(m):
            A[j, l] = wmom(j + l)
        b[j] = -wmom(j + m)
    a = mp.lu_solve(A, b)
    coeffs = [mp.mpf(1)] + [a[m - 1 - i] for i in range(m)]
    roots = mp.polyroots(coeffs, maxsteps=400, extraprec=400)
    assert max(abs(mp.im(r)) for r in roots) < mp.mpf(10) ** -50
    return [mp.re(r) for r in roots]


def weights_for(nodes):
    n = len(nodes)
    V = mp.matrix(n, n)
    b = mp.matrix(n, 1)
    for j in range(n):
        for i, x in enumerate(nodes):
            V[j, i] = x ** j
        b[j] = gauss_moment(j)
    return mp.lu_solve(V, b)


def exactness_degree(nodes, w):
    d = 0
    while d <= 80:
        s = sum(wi * x ** d for wi, x in zip(w, nodes))
        M = gauss_moment(d)
        if abs(s - M) > mp.mpf(10) ** -40 * max(1, abs(M)):
            return d - 1
        d += 1
    return d


def main():
    out = os.path.join(os.path.dirname(__file__), "..", "src", "sgcol", "_gk_table.txt")
    nodes = [mp.mpf(0)]
    records = []
    w = weights_for(nodes)
    records.append((nodes, w, exactness_degree(nodes, w)))
    for m in EXTENSIONS:
        nodes = sorted(nodes + patterson_extension(nodes, m))
        w = weights_for(nodes)
        records.append((nodes, w, exactness_degree(nodes, w)))
    with open(out, "w") as fh:
        for nodes, w, deg in records:
            fh.write(f"{len(nodes)} {deg}\n")
            for x, wi in zip(nodes, w):
                fh.write(f"{float(x):.17e} {float(wi):.17e}\n")
            print(f"n={len(nodes)} degree={deg}")


if __name__ == "__main__":
    main()

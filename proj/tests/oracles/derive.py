"""Independent numpy reference values frozen into the C++ tests.

Run: python3 tests/oracles/derive.py
"""
import cmath
import math

import numpy as np


def dmul(g, h):
    return (g[0] + (-1) ** g[1] * h[0], g[1] ^ h[1])


def dinv(g):
    return g if g[1] else (-g[0], 0)


def dihedral_elements():
    return {"a": (1, 0), "a_inv": (-1, 0), "b": (1, 1), "c": (-1, 1), "d": (0, 1), "e": (0, 0)}


def generic_scalars(p, q, mu, s1, s2, s3):
    nu = math.sqrt(1 - mu * mu)
    alpha = math.sqrt(p) * math.sqrt(1 - q) - s2 * math.sqrt(1 - p) * math.sqrt(q)
    beta = abs(s2 * math.sqrt(p * q) + math.sqrt((1 - p) * (1 - q)))
    return {
        "a": nu * math.sqrt(p) * math.sqrt(q),
        "a_inv": s2 * nu * math.sqrt(1 - p) * math.sqrt(1 - q),
        "b": s2 * s1 * 1j * nu * math.sqrt(p) * math.sqrt(1 - q),
        "c": -s1 * 1j * nu * math.sqrt(1 - p) * math.sqrt(q),
        "d": s3 * 1j * mu * beta,
        "e": -s1 * s3 * mu * alpha,
    }


def unitarity_residual(z, els, mul, inv):
    left, right = {}, {}
    for h1, z1 in z.items():
        for h2, z2 in z.items():
            if h1 == h2:
                continue
            gl = mul(els[h1], inv(els[h2]))
            gr = mul(inv(els[h1]), els[h2])
            left[gl] = left.get(gl, 0) + z1 * np.conj(z2)
            right[gr] = right.get(gr, 0) + np.conj(z1) * z2
    norm = sum(abs(v) ** 2 for v in z.values())
    return max([abs(norm - 1)] + [abs(v) for v in left.values()] + [abs(v) for v in right.values()])


def scalar_step(psi, z, els):
    """psi'_g = sum_h z_h psi_{g h} on a dict-supported state."""
    out = {}
    for g in set(dmul(x, dinv(els[h])) for x in psi for h in z):
        v = sum(z[h] * psi.get(dmul(g, els[h]), 0) for h in z)
        if abs(v) > 0:
            out[g] = v
    return out


def main():
    z = generic_scalars(0.8, 0.2, 0.5, 1, 1, 1)
    print("generic scalars p=.8 q=.2 mu=.5 s=+++:")
    for k, v in z.items():
        print(f"  {k}: {v.real!r} {complex(v).imag!r}")
    print("  unitarity residual", unitarity_residual(z, dihedral_elements(), dmul, dinv))

    ap = np.array([[z["a"], z["b"]], [z["c"], z["a_inv"]]])
    am = np.array([[z["a_inv"], z["c"]], [z["b"], z["a"]]])
    ae = np.array([[z["e"], z["d"]], [z["d"], z["e"]]])
    delta = np.trace(ap).real
    gamma = (np.trace(ae) / 2).real
    print("delta", repr(delta), "gamma", repr(gamma))
    k = 0.7
    ak = np.exp(-1j * k) * ap + np.exp(1j * k) * am + ae
    w = np.angle(np.linalg.eigvals(ak))
    print("eigenphases at k=0.7", sorted(w), "arccos", math.acos(delta * math.cos(k) + gamma))

    # Scalar D_inf evolution, 3 steps from a delta at e; probability per H-site x
    # with g = a^x c_j, c_1 = e, c_2 = r.
    psi = {(0, 0): 1.0}
    for _ in range(3):
        psi = scalar_step(psi, z, dihedral_elements())
    prob = {}
    for g, v in psi.items():
        x = g[0]
        prob[x] = prob.get(x, 0) + abs(v) ** 2
    print("D_inf 3-step site distribution:", {x: repr(p) for x, p in sorted(prob.items())})

    # Dirac nu=0.8 two steps from (site 0, component 1).
    nu, mu = 0.8, 0.6
    cp = np.array([[nu, 0], [0, 0]])
    cm = np.array([[0, 0], [0, nu]])
    c0 = np.array([[0, 1j * mu], [1j * mu, 0]])
    psi = {0: np.array([0, 1], dtype=complex)}
    for _ in range(2):
        new = {}
        for x in range(-5, 6):
            v = cp @ psi.get(x + 1, np.zeros(2)) + cm @ psi.get(x - 1, np.zeros(2)) + c0 @ psi.get(x, np.zeros(2))
            if np.linalg.norm(v) > 0:
                new[x] = v
        psi = new
    print("Dirac 2 steps:", {x: [repr(abs(c) ** 2) for c in v] for x, v in sorted(psi.items())})

    kk = 1.0
    print("Dirac velocity at k=1:", repr(nu * math.sin(kk) / math.sqrt(1 - nu * nu * math.cos(kk) ** 2)))

    # make_parity_walk(0.36, 0.64): nu^2, cos^2 phi roots of x^2 - (1 + d^2 - g^2) x + d^2.
    for d, g in [(0.36, 0.64), (0.36, -0.64), (0.5, 0.2)]:
        b = 1 + d * d - g * g
        disc = max(0.0, b * b - 4 * d * d)
        u = (b + math.sqrt(disc)) / 2
        nu_ = math.sqrt(u)
        mu_ = math.sqrt(1 - u)
        phi = math.atan2(-g / mu_ if mu_ > 0 else 0.0, d / nu_)
        print(f"parity walk delta={d} gamma={g}: nu={nu_!r} phi={phi!r}")

    # Z2 x Z character blocks for generators (0,+1), (1,+1) with scalars u, v.
    u, v = 0.6, 0.8j
    print("Z2xZ blocks j=1,2:", [u + v * cmath.exp(1j * math.pi * j) for j in (1, 2)])


if __name__ == "__main__":
    main()

"""Emit exact manufactured source terms for the 2D elastic and Stokes checks.

Run: python3 generate_sources.py > ../../core/src/mms_sources.inc
"""
import sympy as sp

x, y, t = sp.symbols("x y t", real=True)
lam, muh, mu, rhoB, rhoL = sp.symbols("lam muh mu rhoB rhoL", positive=True)
X = sp.Matrix([x, y])


def grad(v):
    return v.jacobian(X)


def div_rows(A):
    return sp.Matrix([sum(sp.diff(A[i, j], X[j]) for j in range(2)) for i in range(2)])


# Solid: vanishes to second order on r = 2, so the outer boundary is traction free.
r2 = x**2 + y**2
s = sp.sin(2 * t) * (4 - r2) ** 2 / 10
u = sp.Matrix([s * (1 + x), s * x * y])
G = grad(u)
E = (G + G.T) / 2
P = lam * E.trace() * sp.eye(2) + 2 * muh * E
fs = rhoB * sp.diff(u, t, 2) - div_rows(P)

# Fluid on the unit disk.
v = sp.Matrix([sp.cos(t) * sp.sin(x) * sp.cos(y) + sp.Rational(3, 10) * x**2,
               -sp.cos(t) * sp.cos(x) * sp.sin(y) + sp.sin(t) * x * y])
p = sp.sin(t + x) * y + 1
Gv = grad(v)
Tf = -p * sp.eye(2) + mu * (Gv + Gv.T)
g = Gv.trace()
ff = rhoL * sp.diff(v, t) - div_rows(Tf)
n = sp.Matrix([x, y]) / sp.sqrt(r2)
d = Tf * n

exprs = {
    "solid_u0": u[0], "solid_u1": u[1],
    "solid_ut0": sp.diff(u[0], t), "solid_ut1": sp.diff(u[1], t),
    "solid_f0": fs[0], "solid_f1": fs[1],
    "fluid_v0": v[0], "fluid_v1": v[1], "fluid_p": p, "fluid_g": g,
    "fluid_f0": ff[0], "fluid_f1": ff[1], "fluid_d0": d[0], "fluid_d1": d[1],
}

print("// Generated by tools/mms/generate_sources.py; do not edit.")
for name, e in exprs.items():
    e = sp.simplify(e)
    used = {str(q) for q in e.free_symbols}
    params = {"lam": "lambda", "muh": "mu_hat", "mu": "mu", "rhoB": "rho_B", "rhoL": "rho_L"}
    args = ", ".join(f"double {a}" if a in used else f"double /*{a}*/" for a in "xyt")
    mat = "const MaterialParams& m" if used & params.keys() else "const MaterialParams& /*m*/"
    print(f"inline double {name}({args}, {mat}) {{")
    for k, field in params.items():
        if k in used:
            print(f"  const double {k} = m.{field};")
    print(f"  return {sp.ccode(e)};")
    print("}")

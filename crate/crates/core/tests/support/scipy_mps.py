"""Solve an MPS file with scipy's HiGHS MILP interface.

Usage: scipy_mps.py MODEL.mps SOLUTION.txt

Writes one `COLUMN VALUE` line per column. Exits 3 if the model is not
solved to optimality.
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_array


def read_mps(path):
    rows, row_sense, cols, col_index = [], {}, [], {}
    obj_row, entries, rhs, integer = None, [], {}, set()
    lower, upper = {}, {}
    section, in_int = None, False
    for raw in open(path):
        if raw.startswith("*") or not raw.strip():
            continue
        if not raw[0].isspace():
            section = raw.split()[0]
            continue
        f = raw.split()
        if section == "ROWS":
            sense, name = f
            if sense == "N":
                obj_row = obj_row or name
            else:
                row_sense[name] = sense
                rows.append(name)
        elif section == "COLUMNS":
            if len(f) >= 3 and f[1] == "'MARKER'":
                in_int = f[2] == "'INTORG'"
                continue
            col = f[0]
            if col not in col_index:
                col_index[col] = len(cols)
                cols.append(col)
                if in_int:
                    integer.add(col)
            for row, val in zip(f[1::2], f[2::2]):
                entries.append((row, col, float(val)))
        elif section == "RHS":
            for row, val in zip(f[1::2], f[2::2]):
                rhs[row] = float(val)
        elif section == "BOUNDS":
            kind, col = f[0], f[2]
            val = float(f[3]) if len(f) > 3 else 0.0
            if kind in ("UP", "FX", "BV"):
                upper[col] = 1.0 if kind == "BV" else val
            if kind in ("LO", "FX", "BV"):
                lower[col] = 0.0 if kind == "BV" else val
            if kind in ("MI", "FR"):
                lower[col] = -np.inf
            if kind in ("PL", "FR"):
                upper[col] = np.inf
    n, row_index = len(cols), {r: i for i, r in enumerate(rows)}
    c = np.zeros(n)
    r_i, c_i, vals = [], [], []
    for row, col, val in entries:
        if row == obj_row:
            c[col_index[col]] += val
        else:
            r_i.append(row_index[row])
            c_i.append(col_index[col])
            vals.append(val)
    a = coo_array((vals, (r_i, c_i)), shape=(len(rows), n)).tocsr()
    lo_r = np.full(len(rows), -np.inf)
    hi_r = np.full(len(rows), np.inf)
    for name, i in row_index.items():
        b, s = rhs.get(name, 0.0), row_sense[name]
        if s in ("L", "E"):
            hi_r[i] = b
        if s in ("G", "E"):
            lo_r[i] = b
    lo = np.array([lower.get(x, 0.0) for x in cols])
    hi = np.array([upper.get(x, np.inf) for x in cols])
    integrality = np.array([1 if x in integer else 0 for x in cols])
    return cols, c, a, lo_r, hi_r, lo, hi, integrality


def main():
    model, out = sys.argv[1], sys.argv[2]
    cols, c, a, lo_r, hi_r, lo, hi, integrality = read_mps(model)
    constraints = [LinearConstraint(a, lo_r, hi_r)] if a.shape[0] else []
    res = milp(c, constraints=constraints, bounds=Bounds(lo, hi), integrality=integrality,
               options={"mip_rel_gap": 1e-9})
    if res.status != 0:
        print(res.message, file=sys.stderr)
        sys.exit(3)
    with open(out, "w") as f:
        for name, v in zip(cols, res.x):
            f.write(f"{name} {float(v)!r}\n")


if __name__ == "__main__":
    main()

"""The built-in corpus of worked examples, encoded as case files."""
from __future__ import annotations

from .cases import CaseFile

SL2 = {"variables": ["x", "y", "u", "v"], "relations": ["x*v - y*u - 1"]}
SL2_D = {"u": "x", "v": "y"}


def _case(id: str, kind: str, payload: dict, citation: str, expected=None, flags=()) -> CaseFile:
    exp = {"citation": citation, "checks": dict(expected or {})}
    return CaseFile(id, kind, payload, exp, citation, tuple(flags))


def intro_threefold() -> CaseFile:
    return _case("intro-threefold", "variety-extension", {
        "ring": {"variables": ["x", "y", "u", "v"], "relations": ["x^2*(x-1)*v + y*u^2 - x"]},
        "derivation": {"u": "x^2*(x-1)", "v": "-2*y*u"},
        "fibers": [
            {"name": "(1,0)", "point": [1, 0], "expect": {"empty": True}},
            {"name": "(0,0)", "point": [0, 0], "expect": {"reduced": ["x", "y"], "free": ["u", "v"]},
             "smooth_codim": 1},
            {"name": "(0,1)", "point": [0, 1],
             "expect": {"radical": ["x", "y-1", "u"], "multiplicity": 2, "free": ["v"]},
             "smooth_codim": 1},
            {"name": "(1,1)", "point": [1, 1], "expect": {
                "components": [{"ideal": ["x-1", "y-1", "u-1"], "free": ["v"]},
                               {"ideal": ["x-1", "y-1", "u+1"], "free": ["v"]}],
                "squarefree": "u"}},
        ],
    }, "introductory threefold in A^4 and its fiber degenerations")


def two_plane_threefold() -> CaseFile:
    return _case("two-plane-threefold", "variety-extension", {
        "ring": {"variables": ["x", "y", "c", "d", "e", "f"],
                 "relations": ["x*d - y*(c+1)", "x*c^2 - y^2*e", "y*f - c*(c+1)",
                               "x*f^2 - (c+1)^2*e", "d*e - c*f"]},
        "derivation": {"c": "x*y", "d": "y^2", "f": "x*(2*c+1)", "e": "2*x^2*f - 2*x*y*e"},
        "torsor": {"ring": SL2, "derivation": SL2_D},
        "embedding": {"x": "x", "y": "y", "c": "y*u", "d": "y*v", "e": "x*u^2", "f": "x*u*v"},
        "fibers": [{"name": "(0,0)", "point": [0, 0], "smooth_codim": 3, "expect": {
            "components": [{"ideal": ["x", "y", "c", "e"], "free": ["d", "f"]},
                           {"ideal": ["x", "y", "c+1", "f+d*e"], "free": ["d", "e"]}]}}],
        "trivial_action_on": ["(0,0)"],
    }, "threefold whose fiber over the origin is two disjoint planes with trivial action")


X0_RING = {"variables": ["x", "y", "p", "q", "r"],
           "relations": ["x*r - y*q", "y*p - x*(q-1)", "p*r - q*(q-1)"]}
X0_D = {"p": "x^2", "q": "x*y", "r": "y^2"}


def x0_case() -> CaseFile:
    return _case("X0", "variety-extension", {
        "ring": X0_RING, "derivation": X0_D, "nilpotency_bound": 2,
        "memberships": [{"label": "D-compatibility", "poly": "x^2*r + y^2*p - x*y*(2*q-1)"}],
        "torsor": {"ring": SL2, "derivation": SL2_D},
        "embedding": {"x": "x", "y": "y", "p": "x*u", "q": "x*v", "r": "y*v"},
        "fibers": [{"name": "(0,0)", "point": [0, 0], "smooth_codim": 2,
                    "expect": {"reduced": ["x", "y", "p*r - q*(q-1)"]}}],
    }, "extension X0 of SL2 with fiber the smooth quadric pr = q(q-1)")


X1_RING = {"variables": ["x", "y", "z1", "z2", "w"],
           "relations": ["x*w - y*(y*z1+1)", "x*z2 - z1*(y*z1+1)", "z1*w - y*z2"]}
X1_D = {"z1": "x", "z2": "2*y*z1+1", "w": "y^2"}


def x1_case() -> CaseFile:
    return _case("X1", "variety-extension", {
        "ring": X1_RING, "derivation": X1_D,
        "memberships": [{"label": "quotient-ratio", "poly": "x*w - y*(y*z1+1)"}],
        "torsor": {"ring": SL2, "derivation": SL2_D},
        "embedding": {"x": "x", "y": "y", "z1": "u", "z2": "u*v", "w": "y*v"},
        "fibers": [{"name": "(0,0)", "point": [0, 0], "smooth_codim": 2,
                    "expect": {"reduced": ["x", "y", "z1"], "free": ["z2", "w"]}}],
        "invariants": [{"label": "x-ratio", "num": "x", "den": "y"},
                       {"label": "[y*z1+1:w]", "num": "y*z1+1", "den": "w"}],
        "modification": {
            "source": X0_RING, "source_derivation": X0_D,
            "morphism": {"x": "x", "y": "y", "p": "x*z1", "q": "y*z1+1", "r": "w"},
            "localize_at": "x",
            "inverse": {"z1": "p*x_hat", "z2": "p*q*x_hat^2", "w": "r"},
            "center": {"f": "x^2", "generators": ["x^2", "x*p", "p*q"], "names": ["T1", "T2"],
                       "to_target": {"x": "x", "y": "y", "p": "x*z1", "q": "y*z1+1", "r": "w",
                                     "T1": "z1", "T2": "z2"},
                       "from_target": {"x": "x", "y": "y", "z1": "T1", "z2": "T2", "w": "r"}},
        },
    }, "extension X1 with its quotient factorization and the modification onto X0",
        flags=["embedding: the SL2 chart map uses (x, y, u, uv, yv); the variant with yu in the "
               "last slot does not satisfy the X1 relations"])


def xn_case(n: int) -> CaseFile:
    ys = [f"y{i}" for i in range(n + 1)]
    rels = []
    pairs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a + 1:]:
            if i + j == k + l:
                rels.append(f"{ys[i]}*{ys[j]} - {ys[k]}*{ys[l]}")
    for i in range(n):
        rels.append(f"z2*{ys[i]} - z1*{ys[i + 1]}")
        rels.append(f"x*{ys[i + 1]} - {ys[i]}*(y0*z1+1)")
    rels.append("x*z2 - z1*(y0*z1+1)")
    D = {"z1": "x", "z2": "2*y0*z1+1"}
    D.update({ys[i]: f"{i}*y0*{ys[i - 1]}" for i in range(1, n + 1)})
    emb = {"x": "x", "y0": "y", "z1": "u", "z2": "u*v"}
    emb.update({ys[i]: f"y*v^{i}" for i in range(1, n + 1)})
    mem = [{"label": f"invariance-y{m}",
            "poly": f"{m}*y0*({ys[m - 1]}*(y0*z1+1) - x*{ys[m]})"} for m in range(1, n + 1)]
    inv = [{"label": f"y{m}/(y0*z1+1)^{m}", "num": ys[m], "den": f"(y0*z1+1)^{m}"}
           for m in range(1, n + 1)]
    steps = [["A2", [0, 0]]] + [[f"U{k}", [0, 0]] for k in range(1, n)]
    si = {f"E{k}": -2 for k in range(1, n)}
    si[f"E{n}"] = -1
    return _case(f"X_{n}", "variety-extension", {
        "ring": {"variables": ["x", "y0", "z1", "z2"] + ys[1:], "relations": rels},
        "base": ["x", "y0"],
        "derivation": D,
        "memberships": mem,
        "torsor": {"ring": {"variables": ["x", "y", "u", "v"], "relations": ["x*v - y*u - 1"]},
                   "derivation": SL2_D},
        "embedding": emb,
        "fibers": [{"name": "(0,0)", "point": [0, 0], "smooth_codim": n + 1,
                    "expect": {"reduced": ["x", "y0", "z1"] + ys[1:n], "free": ["z2", ys[n]]}}],
        "invariants": inv,
        "quotient_tower": {"steps": steps, "self_intersections": si, "multiplicity": 1},
    }, f"family X_n at n = {n}: quotient chart maps (x, y_m/(y0*z1+1)^m) and chain quotient")


def gluing_case(n: int) -> CaseFile:
    loc = "vi - 1" if n == 1 else ("ui*vi - 1" if n == 2 else f"ui^{n - 1}*vi - 1")
    smooth_status = "fail" if n == 1 else "pass"
    return _case(f"X_{2 * n + 3}", "gluing", {
        "charts": {
            "S0": {"variables": ["z0", "u0", "t0"], "inverted": ["u0"],
                   "derivation": {"t0": "1"}, "base": {"x": "z0*u0", "y": "u0"}},
            "Sinf": {"variables": ["zi", "ui", "vi", "ti"],
                     "relations": [f"ui^{n}*vi - zi^2 - ui"],
                     "derivation": {"ti": "1"}, "base": {"x": "ui", "y": "ui*zi"}},
        },
        "overlaps": {"S0": ["z0"], "Sinf": ["zi", "ui"]},
        "transition": {"source": "Sinf", "target": "S0", "images": {
            "zi": "z0^-1", "ui": "z0*u0",
            "vi": f"z0^-{n}*u0^-{n}*(z0^-2 + z0*u0)", "ti": "t0 + z0^-1*u0^-2"}},
        "inverse": {"z0": "zi^-1", "u0": "ui*zi", "t0": "ti - zi^-1*ui^-2"},
        "fiber": {"chart": "Sinf", "localize": loc, "uniformizer": "zi", "multiplicity": 2,
                  "support": ["zi", "ui"], "free": ["vi", "ti"], "avoids": ["S0"],
                  "smooth_codim": 1},
        "bundle": {
            "charts": {"W0": {"variables": ["z0", "u0", "w0"], "derivation": {"w0": "u0^2"}},
                       "Winf": {"variables": ["zi", "ui", "wi"], "derivation": {"wi": "ui^2"}}},
            "overlaps": {"W0": ["z0"], "Winf": ["zi"]},
            "transition": {"source": "Winf", "target": "W0",
                           "images": {"zi": "z0^-1", "ui": "z0*u0", "wi": "z0^2*w0 + z0"}},
            "inverse": {"z0": "zi^-1", "u0": "ui*zi", "w0": "zi^2*wi - zi"},
            "beta": {"W0": {"target": "S0", "images": {"z0": "z0", "u0": "u0", "w0": "u0^2*t0"}},
                     "Winf": {"target": "Sinf",
                              "images": {"zi": "zi", "ui": "ui", "wi": "ui^2*ti"}}},
        },
    }, f"family X_(2n+3) at n = {n}: two-chart gluing, multiplicity-two fiber, map to W(SL2,2)",
        expected={"smooth:Sinf": smooth_status},
        flags=[] if n > 1 else ["the chart ui*(vi-1) = zi^2 has an A1 singular point at "
                                "zi = ui = 0, vi = 1 on the exceptional curve"])


def chain_tower_case(n: int) -> CaseFile:
    steps = [["A2", [0, 0]]] + [[f"U{k}", [0, 0]] for k in range(1, n)]
    si = {f"E{k}": -2 for k in range(1, n)}
    si[f"E{n}"] = -1
    return _case(f"tower-chain-{n}", "tower", {
        "steps": steps, "self_intersections": si,
        "edges": [[f"E{k}", f"E{k + 1}"] for k in range(1, n)],
        "multiplicity": {f"E{k}": 1 for k in range(1, n + 1)},
        "open_surface": True, "removed_point": ["U1", [0, 0]] if n == 1 else None,
    }, "chain dual graph of the family X_n quotient: (-2)^(n-1) then -1")


def five_step_case() -> CaseFile:
    return _case("tower-five-step", "tower", {
        "steps": [["A2", [0, 0]], ["U1", [0, 0]], ["U2", [0, 0]], ["V3", [0, 0]], ["U4", [0, 1]]],
        "self_intersections": {"E1": -2, "E2": -3, "E3": -2, "E4": -2, "E5": -1},
        "edges": [["E1", "E2"], ["E2", "E4"], ["E3", "E4"], ["E4", "E5"]],
        "multiplicity": {"E1": 1, "E2": 1, "E3": 1, "E4": 2, "E5": 2},
    }, "five-step tower with self-intersections (-2,-3,-2,-2) and final -1")


def fork_tower_case(n: int) -> CaseFile:
    steps = [["A2", [0, 0]], ["U1", [0, 0]], ["V2", [0, 0]], ["U3", [0, 1]]]
    steps += [[f"U{k}", [0, 0]] for k in range(4, 2 * n + 3)]
    last = 2 * n + 3
    si = {"E1": -3, **{f"E{k}": -2 for k in range(2, last)}, f"E{last}": -1}
    edges = [["E1", "E3"], ["E2", "E3"]] + [[f"E{k}", f"E{k + 1}"] for k in range(3, last)]
    mult = {"E1": 1, "E2": 1, **{f"E{k}": 2 for k in range(3, last + 1)}}
    return _case(f"tower-fork-{n}", "tower", {
        "steps": steps, "self_intersections": si, "edges": edges, "multiplicity": mult,
        "open_surface": True,
    }, f"fork dual graph of the family X_(2n+3) quotient at n = {n}; fiber 2E")


def sl2_cocycle_case() -> CaseFile:
    return _case("cocycle-SL2", "cocycle", {
        "cocycle": "x^-1*y^-1", "l0": 2,
        "restriction": {"2": True, "3": False, "4": False, "5": False},
        "h1_dims": {str(s): s - 1 for s in range(1, 7)},
        "random_reduction": {"level": 2, "count": 200, "seed": 7, "u_degree": 3,
                             "z_range": [-4, 4]},
    }, "SL2 as the torsor of x^-1*y^-1; W(SL2,2) and the restriction test")


def homogeneous_cocycle_case() -> CaseFile:
    return _case("cocycle-P(2,2,x+y)", "cocycle", {
        "m": 2, "n": 2, "p": "x+y", "l0": 3, "homogeneous": True,
        "restriction": {"3": True, "4": False},
    }, "homogeneous torsor P_(m,n,p) with m = n = 2 and p = x + y")


def synthesis_case(label: str, tower_steps, removed=None, cocycle="x^-1*y^-1") -> CaseFile:
    payload = {"cocycle": cocycle, "tower": tower_steps}
    if removed:
        payload["removed_point"] = removed
    return _case(f"synth-{label}", "synthesis", payload,
                 "iterated equivariant modifications from a cocycle and a tower")


def builtin_corpus() -> list[CaseFile]:
    chain2 = [["A2", [0, 0]], ["U1", [0, 0]]]
    fork1 = [["A2", [0, 0]], ["U1", [0, 0]], ["V2", [0, 0]], ["U3", [0, 1]], ["U4", [0, 0]]]
    cases = [intro_threefold(), two_plane_threefold(), x0_case(), x1_case()]
    cases += [xn_case(n) for n in (1, 2, 3)]
    cases += [gluing_case(n) for n in (1, 2)]
    cases += [chain_tower_case(n) for n in (2, 3, 4, 5)]
    cases += [five_step_case(), fork_tower_case(1), fork_tower_case(2)]
    cases += [sl2_cocycle_case(), homogeneous_cocycle_case()]
    cases += [synthesis_case("SL2-point", [["A2", [0, 0]]], ["U1", [0, 0]]),
              synthesis_case("SL2-chain2", chain2),
              synthesis_case("SL2-fork1", fork1)]
    return cases


def corpus_by_id() -> dict[str, CaseFile]:
    return {c.id: c for c in builtin_corpus()}

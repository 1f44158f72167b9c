"""Command-line interface: group ingestion, catalog, analyses, theorem
verification, and the flagship centricity-contrast reproduction.

Exit codes: 0 success; 1 a verification clause failed (an implementation
fault by contract); 2 invalid input; 3 size guard; 4 model limitation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .catalog import catalog_group, catalog_names, default_prime
from .errors import (
    InvalidInput,
    InvariantViolation,
    ModelLimitation,
    PLocalError,
    SizeGuardExceeded,
)
from .fusion import fusion_system
from .groups import Subgroup, enumerate_group, sylow_subgroup
from .locality import Locality, build_locality
from .perm import cycle_string, from_cycles

TASKS = (
    "collections",
    "locality",
    "normals",
    "decompose",
    "fstar",
    "delta",
    "regular",
    "components",
    "verify-C",
    "verify-D",
    "verify-balance",
)

EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_SIZE_GUARD = 3
EXIT_MODEL_LIMITATION = 4


def load_group(source, bound):
    """catalog:NAME or a JSON file {name, degree, generators, prime}."""
    if source.startswith("catalog:"):
        name = source.split(":", 1)[1]
        return catalog_group(name, bound=bound), default_prime(name)
    with open(source) as fh:
        data = json.load(fh)
    degree = int(data.get("degree", 0))
    if degree <= 0:
        raise InvalidInput("degree must be a positive integer")
    gens = [from_cycles(c, degree) for c in data.get("generators", [])]
    G = enumerate_group(gens, degree=degree, bound=bound, name=data.get("name", "G"))
    return G, int(data.get("prime", 2))


def subgroup_descriptor(G, H):
    return {
        "order": H.order,
        "generators": [cycle_string(G.elements[x]) for x in H.generators()],
    }


def _locality_for(G, S, p, delta_choice):
    F = fusion_system(G, S, p)
    if delta_choice in ("cr", "c", "q", "s"):
        seed = F.collection(delta_choice).members()
        return build_locality(G, S, p, seed, name=f"L{delta_choice}({G.name})")
    if delta_choice == "delta":
        from .regular import build_regular

        return build_regular(G, p).locality
    raise InvalidInput(f"unknown object-set choice {delta_choice!r}")


def run_analysis(G, p, tasks, delta_choice="cr", guards=None, timing=False):
    """Execute tasks in dependency order; per-task failures are isolated."""
    from . import normals as nm
    from . import regular as rg
    from .decomp import ag_decompose

    report = {
        "tool": {"name": "plocal", "version": __version__},
        "input": {"group": G.name, "order": G.order, "degree": G.degree, "p": p},
        "tasks": {},
    }
    t0 = time.monotonic()
    S = sylow_subgroup(G, p)
    F = fusion_system(G, S, p)
    worst = 0

    def record(task, fn):
        nonlocal worst
        try:
            report["tasks"][task] = {"status": "ok", "result": fn()}
        except PLocalError as e:
            code = classify_error(e)
            worst = max(worst, code)
            report["tasks"][task] = {
                "status": "error",
                "error": type(e).__name__,
                "message": str(e),
                "exit_code": code,
            }

    ordered = [t for t in TASKS if t in tasks]
    state = {}
    for task in ordered:
        if task == "collections":
            record(task, lambda: {
                k: F.collection(k).serialize() for k in ("cr", "c", "q", "s")
            })
        elif task == "locality":
            def _loc():
                L = _locality_for(G, S, p, delta_choice)
                state["L"] = L
                d = L.report_data()
                d["axioms"] = L.verify_axioms().as_dict()
                return d
            record(task, _loc)
        elif task == "normals":
            def _normals():
                L = state.get("L") or _locality_for(G, S, p, delta_choice)
                state["L"] = L
                out = []
                for N in nm.enumerate_partial_normals(L):
                    out.append({
                        "members": len(N.ids),
                        "T": subgroup_descriptor(G, N.T),
                        "Z": nm.z_of(N).order,
                        "C_S": nm.c_s_of(N).order,
                        "N_perp": len(nm.n_perp(L, N).ids),
                    })
                return {"mode": "fast", "complete_for_group_case": True, "normals": out}
            record(task, _normals)
        elif task == "decompose":
            def _dec():
                L = state.get("L") or _locality_for(G, S, p, delta_choice)
                state["L"] = L
                out = []
                for g in sorted(L.carrier):
                    d = ag_decompose(L, L.S, g)
                    out.append(d.as_dict(G))
                return out
            record(task, _dec)
        elif task == "fstar":
            def _fs():
                reg = rg.build_regular(G, p)
                return {
                    "members": len(reg.fstar.ids),
                    "T": subgroup_descriptor(G, reg.fstar.T),
                }
            record(task, _fs)
        elif task == "delta":
            def _delta():
                reg = rg.build_regular(G, p)
                return [
                    subgroup_descriptor(reg.group, H)
                    for H in sorted(
                        (reg.locality.members(d) for d in reg.locality.delta_ids),
                        key=lambda H: H.key(),
                    )
                ]
            record(task, _delta)
        elif task == "regular":
            def _reg():
                reg = rg.build_regular(G, p)
                state["reg"] = reg
                return {
                    "carrier": len(reg.locality.carrier),
                    "objects": len(reg.locality.delta_ids),
                    "reduction": list(reg.reduction_notes),
                    "certificate": reg.delta_report.as_dict(),
                }
            record(task, _reg)
        elif task == "components":
            def _comp():
                reg = state.get("reg") or rg.build_regular(G, p)
                state["reg"] = reg
                return [
                    {"members": len(c.ids), "T": subgroup_descriptor(G, c.T)}
                    for c in reg.components()
                ]
            record(task, _comp)
        elif task == "verify-C":
            def _vc():
                reg = state.get("reg") or rg.build_regular(G, p)
                state["reg"] = reg
                out = []
                ok = True
                for N in nm.enumerate_partial_normals(reg.locality):
                    rep = rg.verify_theorem_c(reg, N)
                    ok = ok and rep.passed
                    out.append(rep.as_dict())
                if not ok:
                    raise InvariantViolation("a normal-structure clause failed")
                return out
            record(task, _vc)
        elif task == "verify-D":
            def _vd():
                reg = state.get("reg") or rg.build_regular(G, p)
                state["reg"] = reg
                rep = rg.verify_theorem_d(reg)
                if not rep.passed:
                    raise InvariantViolation("a component-structure clause failed")
                return rep.as_dict()
            record(task, _vd)
        elif task == "verify-balance":
            def _vb():
                reg = state.get("reg") or rg.build_regular(G, p)
                state["reg"] = reg
                out = []
                ok = True
                FL = reg.locality.fusion_system_of()
                for H in FL.subgroups():
                    if not FL.is_fully_normalized(H):
                        continue
                    rep = rg.verify_e_balance(reg, H)
                    ok = ok and rep.passed
                    out.append(rep.as_dict())
                if not ok:
                    raise InvariantViolation("a balance clause failed")
                return out
            record(task, _vb)
    if timing:
        report["timing_seconds"] = round(time.monotonic() - t0, 3)
    return report, worst


def classify_error(e):
    if isinstance(e, SizeGuardExceeded):
        return EXIT_SIZE_GUARD
    if isinstance(e, ModelLimitation):
        return EXIT_MODEL_LIMITATION
    if isinstance(e, InvalidInput):
        return EXIT_INVALID_INPUT
    return EXIT_VERIFICATION_FAILED


def reproduce_remark():
    """The centricity-contrast computation on the order-2688 catalog entry.

    Builds the group as a locality whose objects are the overgroups of the
    translation module V, takes the unique index-2 subgroup N with T = S cap N,
    and decides three centricity statements.
    """
    from .groups import (
        centralizer,
        normal_subgroups,
        p_part,
        sub_p_core,
    )
    from .normals import certify_partial_normal

    G = catalog_group("V_GL32")
    p = 2
    S = sylow_subgroup(G, p)
    F = fusion_system(G, S, p)
    V = sub_p_core(G, G.whole(), p)
    L = build_locality(G, S, p, [V], name="L(V_GL32)")
    index2 = [N for N in normal_subgroups(G) if N.order * 2 == G.order]
    if len(index2) != 1:
        raise InvariantViolation("the index-2 subgroup is not unique")
    Nsub = index2[0]
    N = certify_partial_normal(L, Nsub.ids & L.carrier, via_ambient=Nsub)
    T = N.T
    VT = Subgroup(G, V.ids & T.ids)
    E = N.fusion()

    t_centric = all(F.c_s(R).ids <= R.ids for R in F.f_class(T))
    vt_cr_in_E = VT in E.collection("cr")
    vt_centric_in_F = all(F.c_s(R).ids <= R.ids for R in F.f_class(VT))

    rep = {
        "group": {"name": G.name, "order": G.order},
        "V": subgroup_descriptor(G, V),
        "N_order": Nsub.order,
        "T": subgroup_descriptor(G, T),
        "V_cap_T": subgroup_descriptor(G, VT),
        "clauses": [
            {"name": "T_centric_in_F", "value": t_centric, "expected": True},
            {"name": "VcapT_centric_radical_in_E", "value": vt_cr_in_E, "expected": True},
            {"name": "VcapT_centric_in_F", "value": vt_centric_in_F, "expected": False},
        ],
    }
    ok = all(c["value"] == c["expected"] for c in rep["clauses"])
    return rep, ok


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plocal",
        description="finite localities over ambient permutation groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run analysis tasks on a group")
    pa.add_argument("group", help="group.json path or catalog:NAME")
    pa.add_argument("--p", type=int, default=None, help="the prime")
    pa.add_argument("--tasks", default="collections", help="comma-separated tasks")
    pa.add_argument("--delta", default="cr", help="object set: cr|c|q|s|delta")
    pa.add_argument("--out", default=None, help="write the JSON report here")
    pa.add_argument("--guard-order", type=int, default=100_000)
    pa.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte-determinism)")

    pv = sub.add_parser("verify", help="verify a main theorem on a group")
    pv.add_argument("theorem", choices=["C", "D", "balance"])
    pv.add_argument("group", help="group.json path or catalog:NAME")
    pv.add_argument("--p", type=int, default=None)
    pv.add_argument("--out", default=None)
    pv.add_argument("--guard-order", type=int, default=100_000)

    pr = sub.add_parser("reproduce-remark", help="run the centricity contrast on the 2688 group")
    pr.add_argument("--out", default=None)

    pc = sub.add_parser("catalog", help="list built-in groups")

    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            for name in catalog_names():
                print(name)
            return 0
        if args.command == "reproduce-remark":
            rep, ok = reproduce_remark()
            _emit(rep, args.out)
            return 0 if ok else EXIT_VERIFICATION_FAILED
        G, default_p = load_group(args.group, getattr(args, "guard_order", 100_000))
        p = args.p or default_p
        if p < 2:
            raise InvalidInput("prime must be at least 2")
        if args.command == "analyze":
            tasks = [t.strip() for t in args.tasks.split(",") if t.strip()]
            bad = [t for t in tasks if t not in TASKS]
            if bad or not tasks:
                raise InvalidInput(f"unknown or empty tasks: {bad}")
            report, worst = run_analysis(
                G, p, tasks, delta_choice=args.delta, timing=args.timing
            )
            _emit(report, args.out)
            return worst
        if args.command == "verify":
            task = {"C": "verify-C", "D": "verify-D", "balance": "verify-balance"}[
                args.theorem
            ]
            report, worst = run_analysis(G, p, [task])
            _emit(report, args.out)
            return worst
    except PLocalError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return classify_error(e)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except json.JSONDecodeError as e:
        print(f"error: bad JSON input: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    return 0


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    sys.exit(main())

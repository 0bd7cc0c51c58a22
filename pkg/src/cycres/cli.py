"""Command-line driver.

Subcommands: classify | resolve | verify | gb | homology.  Inputs are UTF-8
JSON documents, either {"matrix": [[..]]} (signed Laplacian, takes
precedence) or {"n": .., "arcs": [{"from":., "to":., "w":.}, ..]}.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 class error (matrix not irreducible where required).
"""

import argparse
import json
import sys
from dataclasses import dataclass

from . import cyc_complex, graph_core, resolution_verify
from .errors import CycresError, NotIrreducibleError, ValidationError
from .poly_ring import elem_str

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_VALIDATION = 2
EXIT_CLASS = 3


@dataclass
class RunConfig:
    command: str
    path: str
    omega: int = None
    d_max: int = None
    fmt: str = "text"
    seed: int = 0
    require_minimal: bool = False
    out: str = None
    d_max_cap: int = 12


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return graph_core.parse_digraph(fh.read())


def _prepare(cfg):
    g = _load(cfg.path)
    L = graph_core.laplacian(g)
    return graph_core.prepare(L, cfg.omega)


def _emit(cfg, payload, text):
    if cfg.fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_classify(cfg: RunConfig) -> int:
    g = _load(cfg.path)
    L = graph_core.laplacian(g)
    cls = graph_core.classify(L)
    if cls == "CB":
        _emit(cfg, {"class": "CB", "irreducible": False}, "CB (reducible)")
        return EXIT_OK
    from . import intlinalg

    mu = intlinalg.adjugate_row(L.signed_rows())
    nu = intlinalg.grading_vector(mu)
    already = graph_core.block_echelon_structure(L)
    M = graph_core.prepare(L, cfg.omega)
    delta = len(M.echelon)
    payload = {
        "class": cls,
        "mu": list(mu),
        "nu": list(nu),
        "echelon_input": already is not None,
        "delta": delta,
        "blocks": list(M.echelon),
        "perm": list(M.perm),
    }
    text = (
        f"{cls}, mu={tuple(mu)}, nu={tuple(nu)}, "
        f"echelon={'yes' if already else 'no'}, delta={delta}, "
        f"blocks={tuple(M.echelon)}, perm={tuple(M.perm)}"
    )
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_resolve(cfg: RunConfig) -> int:
    M = _prepare(cfg)
    C = cyc_complex.build_complex(M)
    doc = cyc_complex.export_json(C, indent=2)
    minimal, _ = cyc_complex.minimality_check(C)
    summary = f"ranks={list(C.ranks())} minimal={str(minimal).lower()}"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        print(summary)
    else:
        print(doc)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    M = _prepare(cfg)
    C = cyc_complex.build_complex(M)
    d_max = cfg.d_max
    if d_max is None:
        d_max = resolution_verify.default_d_max(C, cap=cfg.d_max_cap)
    report = resolution_verify.full_verify(
        C, d_max=d_max, seed=cfg.seed, instance=cfg.path
    )
    ok = report.passed
    minimal, witness = cyc_complex.minimality_check(C)
    if cfg.require_minimal and not minimal:
        report.checks.append(
            resolution_verify.CheckResult(
                "require_minimal", False, f"non-minimal entry {witness}"
            )
        )
        ok = False
    _emit(cfg, report.to_json_dict(), report.to_text())
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def cmd_gb(cfg: RunConfig) -> int:
    M = _prepare(cfg)
    C = cyc_complex.build_complex(M)
    lines = [elem_str(f, C.tower, 0) for f in C.diffs[1]]
    _emit(cfg, {"groebner_basis": lines}, "\n".join(lines))
    return EXIT_OK


def cmd_homology(cfg: RunConfig) -> int:
    M = _prepare(cfg)
    C = cyc_complex.build_complex(M)
    d_max = cfg.d_max
    if d_max is None:
        d_max = resolution_verify.default_d_max(C, cap=cfg.d_max_cap)
    check = resolution_verify.graded_homology_oracle(C, d_max)
    report = resolution_verify.VerificationReport(cfg.path, [check])
    _emit(cfg, report.to_json_dict(), report.to_text())
    return EXIT_OK if check.ok else EXIT_VERIFY_FAIL


COMMANDS = {
    "classify": cmd_classify,
    "resolve": cmd_resolve,
    "verify": cmd_verify,
    "gb": cmd_gb,
    "homology": cmd_homology,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cycres",
        description="Free resolutions of digraph lattice ideals, exactly verified.",
    )
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", help="path to a JSON instance file")
    ap.add_argument("--omega", type=int, default=None,
                    help="distinguished vertex for the distance enumeration (default: n)")
    ap.add_argument("--max-degree", type=int, default=None, dest="d_max",
                    help="degree bound for the homology oracle")
    ap.add_argument("--format", choices=["text", "json"], default="text", dest="fmt")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    ap.add_argument("--require-minimal", action="store_true")
    ap.add_argument("--out", default=None, help="output path for resolve")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        path=args.input,
        omega=args.omega,
        d_max=args.d_max,
        fmt=args.fmt,
        seed=args.seed,
        require_minimal=args.require_minimal,
        out=args.out,
    )
    if cfg.d_max is not None and cfg.d_max < 0:
        print("error: --max-degree must be nonnegative", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return COMMANDS[cfg.command](cfg)
    except NotIrreducibleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CLASS
    except (ValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except CycresError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY_FAIL


if __name__ == "__main__":
    sys.exit(main())

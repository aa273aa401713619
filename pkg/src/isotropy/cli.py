"""Command line front end: batch JSON in, canonical JSON out.

Commands: canonical, describe, dim, codim, sample, generators, verify,
commutant, factor, selftest.  All input and output is JSON; dumps are
canonical (sorted keys, fixed indent), so identical requests with the
same seed produce byte-identical bytes.

Exit codes: 0 success, 1 verification answered false, 2 bad input,
3 internal integrity failure.
"""

import argparse
import hashlib
import json
import os
import sys

from .acceptance import format_results, run_all
from .errors import IntegrityError, IsotropyError, MembershipError
from .forms import (MultiSegreStructure, SegreStructure, backward_form,
                    interleave_form, symmetric_form, transition_form)
from .generators import factor_unipotent, generator_from_spec
from .jsonio import (description_to_json, dumps_canonical,
                     free_params_from_json, free_params_to_json,
                     generator_spec_from_json, generator_spec_to_json,
                     matrix_from_json, matrix_to_json, orbit_report_to_json,
                     structure_from_json, structure_to_json,
                     toeplitz_to_json)
from .matrices import ExactMatrix
from .orbit import codim_formula, consistency_check
from .rng import RandomSource
from .solver import CongruenceData, random_free_params
from .stabilizer import (describe_isotropy, sample_isotropy_element,
                         to_toeplitz_coordinates, verify_isotropy)
from .toeplitz import commutant_basis


def _load_json_argument(value: str):
    text = value.strip()
    if not text.startswith(("{", "[")):
        with open(value, "r", encoding="utf-8") as handle:
            text = handle.read()
    return json.loads(text)


def _require(args, flag, what):
    value = getattr(args, flag)
    if value is None:
        raise IsotropyError(f"{what} requires --{flag.replace('_', '-')}")
    return value


def _structure_of(args):
    return structure_from_json(
        _load_json_argument(_require(args, "structure", args.command)))


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ISOTROPY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise IsotropyError(
                f"ISOTROPY_SEED must be an integer, got {env!r}") from None
    return 0


def _cmd_canonical(args):
    st = _structure_of(args)
    return {
        "symmetric": matrix_to_json(symmetric_form(st)),
        "transition": matrix_to_json(transition_form(st)),
        "interleave": matrix_to_json(interleave_form(st)),
        "flip": matrix_to_json(backward_form(st)),
    }, 0


def _cmd_describe(args):
    return description_to_json(describe_isotropy(_structure_of(args))), 0


def _cmd_dim(args):
    return {"dimension": describe_isotropy(_structure_of(args)).dimension}, 0


def _cmd_codim(args):
    st = _structure_of(args)
    report = consistency_check(st)
    payload = orbit_report_to_json(report)
    return {"codimension": codim_formula(st), "report": payload}, 0


def _params_for_sampling(structure, args, rnd):
    if args.params is not None:
        payload = _load_json_argument(args.params)
        if isinstance(structure, MultiSegreStructure):
            if not isinstance(payload, list) \
                    or len(payload) != len(structure.parts):
                raise IsotropyError(
                    "multi-eigenvalue sampling needs a JSON array with "
                    "one params object per part")
            return [free_params_from_json(p) for p in payload]
        return free_params_from_json(payload)
    if isinstance(structure, MultiSegreStructure):
        return [random_free_params(CongruenceData.identity(p), rnd,
                                   max_num=2, max_den=2)
                for p in structure.parts]
    return random_free_params(CongruenceData.identity(structure), rnd,
                              max_num=2, max_den=2)


def _params_digest(params) -> str:
    if isinstance(params, list):
        blob = dumps_canonical([free_params_to_json(p) for p in params])
    else:
        blob = dumps_canonical(free_params_to_json(params))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _cmd_sample(args):
    st = _structure_of(args)
    seed = _seed_of(args)
    rnd = RandomSource(seed)
    params = _params_for_sampling(st, args, rnd)
    q = sample_isotropy_element(st, params=params)
    return {
        "matrix": matrix_to_json(q),
        "provenance": {
            "seed": seed if args.params is None else None,
            "params_digest": _params_digest(params),
            "structure": structure_to_json(st),
        },
    }, 0


def _cmd_generators(args):
    st = _structure_of(args)
    if not isinstance(st, SegreStructure):
        raise IsotropyError(
            "generators act within one eigenvalue; pass a single "
            "structure")
    spec = generator_spec_from_json(
        _load_json_argument(_require(args, "params", "generators")))
    form = generator_from_spec(st, spec)
    return {
        "spec": generator_spec_to_json(spec),
        "matrix": matrix_to_json(form.assemble()),
    }, 0


def _cmd_verify(args):
    st = _structure_of(args)
    q = matrix_from_json(
        _load_json_argument(_require(args, "matrix", "verify")))
    member, report = verify_isotropy(st, q)
    return {"member": member, "report": report}, 0 if member else 1


def _cmd_commutant(args):
    st = _structure_of(args)
    if not isinstance(st, SegreStructure):
        raise IsotropyError(
            "the commutant parameterization is per eigenvalue; pass a "
            "single structure")
    dimension, builder = commutant_basis(st)
    basis = []
    for r in range(st.part_count):
        for s in range(st.part_count):
            m_r, m_s = st.mults[r], st.mults[s]
            for j in range(st.depth(r, s)):
                for a in range(m_r):
                    for b in range(m_s):
                        unit = ExactMatrix.from_rows(
                            [[1 if (x, y) == (a, b) else 0
                              for y in range(m_s)] for x in range(m_r)])
                        basis.append(matrix_to_json(
                            builder({(r, s, j): unit})))
    if len(basis) != dimension:
        raise IntegrityError(
            f"basis enumeration produced {len(basis)} matrices for "
            f"dimension {dimension}")
    return {"dimension": dimension, "basis": basis}, 0


def _cmd_factor(args):
    st = _structure_of(args)
    if not isinstance(st, SegreStructure):
        raise IsotropyError(
            "factorization is per eigenvalue; pass a single structure")
    q = matrix_from_json(
        _load_json_argument(_require(args, "matrix", "factor")))
    form = to_toeplitz_coordinates(st, q)
    core, specs = factor_unipotent(st, form)
    return {
        "core": toeplitz_to_json(core),
        "factors": [generator_spec_to_json(s) for s in specs],
    }, 0


def _cmd_selftest(args):
    results = run_all(max_n=args.max_n, cases=args.cases)
    print(format_results(results), file=sys.stderr)
    payload = {
        "results": [{"number": r.number, "name": r.name,
                     "passed": r.passed, "detail": r.detail}
                    for r in results],
        "all_passed": all(r.passed for r in results),
    }
    return payload, 0 if payload["all_passed"] else 1


_COMMANDS = {
    "canonical": _cmd_canonical,
    "describe": _cmd_describe,
    "dim": _cmd_dim,
    "codim": _cmd_codim,
    "sample": _cmd_sample,
    "generators": _cmd_generators,
    "verify": _cmd_verify,
    "commutant": _cmd_commutant,
    "factor": _cmd_factor,
    "selftest": _cmd_selftest,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isotropy",
        description="Exact isotropy groups of canonical complex "
                    "symmetric matrices.")
    parser.add_argument("command", choices=sorted(_COMMANDS),
                        help="operation to run")
    parser.add_argument("--structure", metavar="FILE|JSON",
                        help="structure as inline JSON or a file path")
    parser.add_argument("--seed", type=int, metavar="N",
                        help="64-bit seed (fallback: env ISOTROPY_SEED, "
                             "then 0)")
    parser.add_argument("--params", metavar="FILE|JSON",
                        help="free parameters or generator spec")
    parser.add_argument("--matrix", metavar="FILE|JSON",
                        help="dense matrix input")
    parser.add_argument("--out", metavar="FILE",
                        help="write JSON here instead of stdout")
    parser.add_argument("--max-n", type=int, default=8, dest="max_n",
                        metavar="N", help="selftest enumeration bound")
    parser.add_argument("--cases", type=int, metavar="N",
                        help="selftest randomized case count override")
    return parser


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        payload, code = handler(args)
    except IntegrityError as exc:
        sys.stderr.write(dumps_canonical({"error": str(exc)}))
        return 3
    except MembershipError as exc:
        sys.stderr.write(dumps_canonical({"error": str(exc)}))
        return 1
    except (IsotropyError, json.JSONDecodeError, OSError, ValueError) as exc:
        sys.stderr.write(dumps_canonical({"error": str(exc)}))
        return 2
    _emit(dumps_canonical(payload), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

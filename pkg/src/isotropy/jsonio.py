"""JSON encoding and decoding for every public object.

Wire conventions: scalars are strings in the exact-scalar grammar;
matrices are {"rows", "cols", "entries"} with row-major entry strings;
group indices (r, s, p, t) are 1-based on the wire and 0-based in code;
coefficient offsets (j, k) keep their mathematical meaning on both
sides.  Dumps are canonical: sorted keys, two-space indent, one
trailing newline, so identical objects serialize byte-identically.
"""

import json

from .errors import ParameterError, StructureError
from .forms import MultiSegreStructure, SegreStructure
from .generators import GeneratorSpec
from .matrices import ExactMatrix
from .orbit import OrbitReport
from .scalars import ExactScalar, format_scalar, parse_scalar
from .solver import CongruenceData, FreeParams
from .stabilizer import IsotropyDescription
from .toeplitz import ToeplitzForm


def dumps_canonical(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _expect_mapping(payload, what):
    if not isinstance(payload, dict):
        raise ParameterError(f"{what}: expected a JSON object, "
                             f"got {type(payload).__name__}")
    return payload


def _expect_count(payload, key, what, minimum=0):
    value = payload.get(key)
    if not isinstance(value, int) or isinstance(value, bool) \
            or value < minimum:
        raise ParameterError(f"{what}: field {key!r} must be an integer "
                             f">= {minimum}")
    return value


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def matrix_to_json(mat: ExactMatrix) -> dict:
    entries = [format_scalar(mat[i, j])
               for i in range(mat.rows) for j in range(mat.cols)]
    return {"rows": mat.rows, "cols": mat.cols, "entries": entries}


def matrix_from_json(payload) -> ExactMatrix:
    payload = _expect_mapping(payload, "matrix")
    rows = _expect_count(payload, "rows", "matrix", minimum=1)
    cols = _expect_count(payload, "cols", "matrix", minimum=1)
    entries = payload.get("entries")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise ParameterError(
            f"matrix: need exactly {rows * cols} entries")
    scalars = [parse_scalar(e) if isinstance(e, str)
               else _reject_entry(e) for e in entries]
    return ExactMatrix.from_rows(
        [scalars[i * cols:(i + 1) * cols] for i in range(rows)])


def _reject_entry(e):
    raise ParameterError(f"matrix: entries must be scalar strings, "
                         f"got {type(e).__name__}")


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------


def structure_to_json(structure) -> dict:
    if isinstance(structure, MultiSegreStructure):
        return {"parts": [structure_to_json(p) for p in structure.parts]}
    if not isinstance(structure, SegreStructure):
        raise StructureError(
            f"cannot serialize {type(structure).__name__} as a structure")
    return {"lambda": format_scalar(structure.lam),
            "blocks": [{"alpha": a, "m": m} for a, m in structure.blocks]}


def structure_from_json(payload):
    payload = _expect_mapping(payload, "structure")
    if "parts" in payload:
        parts = payload["parts"]
        if not isinstance(parts, list) or not parts:
            raise StructureError("structure: parts must be a nonempty list")
        return MultiSegreStructure(
            [structure_from_json(p) for p in parts])
    lam_text = payload.get("lambda")
    if not isinstance(lam_text, str):
        raise StructureError("structure: field 'lambda' must be a "
                             "scalar string")
    blocks_json = payload.get("blocks")
    if not isinstance(blocks_json, list) or not blocks_json:
        raise StructureError("structure: blocks must be a nonempty list")
    blocks = []
    for entry in blocks_json:
        entry = _expect_mapping(entry, "structure block")
        blocks.append((_expect_count(entry, "alpha", "block", minimum=1),
                       _expect_count(entry, "m", "block", minimum=1)))
    return SegreStructure(parse_scalar(lam_text), blocks)


# ---------------------------------------------------------------------------
# Toeplitz forms and congruence data
# ---------------------------------------------------------------------------


def toeplitz_to_json(form: ToeplitzForm) -> dict:
    st = form.structure
    coeffs = {}
    for r in range(st.part_count):
        for s in range(st.part_count):
            coeffs[f"{r + 1},{s + 1}"] = [
                matrix_to_json(form.coefficient(r, s, j))
                for j in range(st.depth(r, s))]
    return {"structure": structure_to_json(st), "coeffs": coeffs}


def _parse_group_key(key, pieces, what):
    parts = key.split(",")
    if len(parts) != pieces:
        raise ParameterError(f"{what}: bad key {key!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParameterError(f"{what}: bad key {key!r}") from None


def toeplitz_from_json(payload) -> ToeplitzForm:
    payload = _expect_mapping(payload, "toeplitz form")
    st = structure_from_json(payload.get("structure"))
    if not isinstance(st, SegreStructure):
        raise StructureError("toeplitz form: needs a single-eigenvalue "
                             "structure")
    coeffs_json = _expect_mapping(payload.get("coeffs"), "coeffs")
    coeffs = {}
    for key, lst in coeffs_json.items():
        r1, s1 = _parse_group_key(key, 2, "coeffs")
        r, s = r1 - 1, s1 - 1
        if not (0 <= r < st.part_count and 0 <= s < st.part_count):
            raise ParameterError(f"coeffs: group key {key!r} out of range")
        if not isinstance(lst, list) or len(lst) != st.depth(r, s):
            raise ParameterError(
                f"coeffs: key {key!r} needs {st.depth(r, s)} matrices")
        coeffs[(r, s)] = [matrix_from_json(m) for m in lst]
    for r in range(st.part_count):
        for s in range(st.part_count):
            if (r, s) not in coeffs:
                raise ParameterError(f"coeffs: missing key {r + 1},{s + 1}")
    flat = {(r, s, j): mat
            for (r, s), lst in coeffs.items()
            for j, mat in enumerate(lst)}
    return ToeplitzForm.from_sparse(st, flat)


def congruence_data_to_json(data: CongruenceData) -> dict:
    st = data.structure
    return {
        "structure": structure_to_json(st),
        "b": {str(r + 1): [matrix_to_json(data.b(r, j))
                           for j in range(st.alphas[r])]
              for r in range(st.part_count)},
        "c": {str(r + 1): [matrix_to_json(data.c(r, j))
                           for j in range(st.alphas[r])]
              for r in range(st.part_count)},
    }


def congruence_data_from_json(payload) -> CongruenceData:
    payload = _expect_mapping(payload, "congruence data")
    st = structure_from_json(payload.get("structure"))

    def one_side(key):
        side_json = _expect_mapping(payload.get(key), key)
        side = [None] * st.part_count
        for group_key, lst in side_json.items():
            (r1,) = _parse_group_key(group_key, 1, key)
            r = r1 - 1
            if not 0 <= r < st.part_count:
                raise ParameterError(
                    f"{key}: group key {group_key!r} out of range")
            if not isinstance(lst, list):
                raise ParameterError(f"{key}: need a list of matrices")
            side[r] = [matrix_from_json(m) for m in lst]
        if any(entry is None for entry in side):
            raise ParameterError(f"{key}: missing groups")
        return side

    return CongruenceData(st, one_side("b"), one_side("c"))


# ---------------------------------------------------------------------------
# free parameters and generator specs
# ---------------------------------------------------------------------------


def free_params_to_json(params: FreeParams) -> dict:
    return {
        "sub": {f"{r + 1},{s + 1},{j}": matrix_to_json(mat)
                for (r, s, j), mat in sorted(params.sub_blocks.items())},
        "seeds": {str(r + 1): matrix_to_json(mat)
                  for r, mat in enumerate(params.diag_seeds)},
        "skews": {f"{r + 1},{j}": matrix_to_json(mat)
                  for (r, j), mat in sorted(params.skews.items())},
    }


def free_params_from_json(payload) -> FreeParams:
    payload = _expect_mapping(payload, "free params")
    sub_json = _expect_mapping(payload.get("sub", {}), "sub")
    seeds_json = _expect_mapping(payload.get("seeds", {}), "seeds")
    skews_json = _expect_mapping(payload.get("skews", {}), "skews")
    sub = {}
    for key, mat in sub_json.items():
        r1, s1, j = _parse_group_key(key, 3, "sub")
        sub[(r1 - 1, s1 - 1, j)] = matrix_from_json(mat)
    seeds_by_group = {}
    for key, mat in seeds_json.items():
        (r1,) = _parse_group_key(key, 1, "seeds")
        seeds_by_group[r1 - 1] = matrix_from_json(mat)
    if sorted(seeds_by_group) != list(range(len(seeds_by_group))):
        raise ParameterError("seeds: group keys must cover 1..N")
    seeds = [seeds_by_group[r] for r in range(len(seeds_by_group))]
    skews = {}
    for key, mat in skews_json.items():
        r1, j = _parse_group_key(key, 2, "skews")
        skews[(r1 - 1, j)] = matrix_from_json(mat)
    return FreeParams(sub, seeds, skews)


def generator_spec_to_json(spec: GeneratorSpec) -> dict:
    if spec.kind == "diagonal_W":
        return {"kind": "W",
                "skews": {f"{r + 1},{j}": matrix_to_json(mat)
                          for (r, j), mat in sorted(spec.skews.items())}}
    return {"kind": "G", "p": spec.p + 1, "t": spec.t + 1, "k": spec.k,
            "F": matrix_to_json(spec.coupling)}


def generator_spec_from_json(payload) -> GeneratorSpec:
    payload = _expect_mapping(payload, "generator spec")
    kind = payload.get("kind")
    if kind == "W":
        skews_json = _expect_mapping(payload.get("skews"), "skews")
        skews = {}
        for key, mat in skews_json.items():
            r1, j = _parse_group_key(key, 2, "skews")
            skews[(r1 - 1, j)] = matrix_from_json(mat)
        return GeneratorSpec("diagonal_W", skews=skews)
    if kind == "G":
        p = _expect_count(payload, "p", "generator spec", minimum=1)
        t = _expect_count(payload, "t", "generator spec", minimum=1)
        k = _expect_count(payload, "k", "generator spec", minimum=0)
        return GeneratorSpec("two_block_G", p=p - 1, t=t - 1, k=k,
                             coupling=matrix_from_json(payload.get("F")))
    raise ParameterError(f"generator spec: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _recipes_to_json(recipes) -> dict:
    if "parts" in recipes:
        return {"parts": [_recipes_to_json(r) for r in recipes["parts"]]}
    return {
        "orthogonal_seeds": [
            {"group": e["group"] + 1, "size": e["size"]}
            for e in recipes["orthogonal_seeds"]],
        "diagonal_skews": [
            {"group": e["group"] + 1, "offset": e["offset"],
             "size": e["size"]}
            for e in recipes["diagonal_skews"]],
        "couplings": [
            {"p": e["p"] + 1, "t": e["t"] + 1, "offset": e["offset"],
             "shape": list(e["shape"])}
            for e in recipes["couplings"]],
    }


def description_to_json(desc: IsotropyDescription) -> dict:
    payload = {
        "structure": structure_to_json(desc.structure),
        "dimension": desc.dimension,
        "reductive_part": list(desc.reductive_part),
        "unipotent_order_bound": desc.unipotent_order_bound,
        "nilpotency_class_bound": desc.nilpotency_class_bound,
        "generator_recipes": _recipes_to_json(desc.generator_recipes),
    }
    if desc.parts:
        payload["parts"] = [description_to_json(p) for p in desc.parts]
    return payload


def orbit_report_to_json(report: OrbitReport) -> dict:
    return {
        "structure": structure_to_json(report.structure),
        "n": report.n,
        "codim_formula": report.codim_formula,
        "isotropy_dim": report.isotropy_dim,
        "tangent_dim": report.tangent_dim,
        "oracle_codim": report.oracle_codim,
    }

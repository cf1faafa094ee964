"""JSON document format for elements, endomorphisms, subgroups and results.

Words are lists of signed letters, vectors are lists of integers and matrices
are lists of rows.  Parsing needs the ambient ``(m, n)`` to size empty
matrices and to check every shape.
"""

from __future__ import annotations

from typing import Any, Sequence

from .closure import AbelianCaseData, ClosureResult, EndoFixedVerdict, OracleSet
from .core import Endomorphism, FatfElement, SubgroupBasis, TypeIEndo, TypeIIEndo, subgroup_basis
from .fix import FixResult, TypeIFamily
from .freewords import Word
from .intlin import IntMatrix, Lattice, SmithDecomposition
from .stallings import build


class DocumentError(ValueError):
    """The document is malformed (wrong JSON shape or types)."""


class ValidationError(ValueError):
    """The document is well formed but violates an invariant."""

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


def _need(doc: Any, key: str, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"field {key!r} must be a {kind.__name__}")
    return val


def _ints(seq: Any, what: str) -> tuple[int, ...]:
    if not isinstance(seq, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in seq):
        raise DocumentError(f"{what} must be a list of integers")
    return tuple(seq)


# ---------------------------------------------------------------------------
# Parsing

def parse_word(doc: Any, n: int) -> Word:
    letters = _ints(doc, "word")
    try:
        return Word(letters, n)
    except ValueError as exc:
        raise ValidationError("word.alphabet", str(exc)) from None


def parse_vector(doc: Any, length: int, what: str = "vector") -> tuple[int, ...]:
    v = _ints(doc, what)
    if len(v) != length:
        raise ValidationError(f"{what}.length", f"{what} must have length {length}, got {len(v)}")
    return v


def parse_matrix(doc: Any, rows: int, cols: int, what: str = "matrix") -> IntMatrix:
    if not isinstance(doc, list):
        raise DocumentError(f"{what} must be a list of rows")
    data = [_ints(r, f"{what} row") for r in doc]
    if len(data) != rows or any(len(r) != cols for r in data):
        raise ValidationError(f"{what}.shape", f"{what} must be {rows}x{cols}")
    return IntMatrix(rows, cols, tuple(data))


def parse_free_matrix(doc: Any) -> IntMatrix:
    """A matrix whose shape is read from the document itself."""
    if not isinstance(doc, list) or not doc:
        raise DocumentError("matrix must be a nonempty list of rows")
    data = [_ints(r, "matrix row") for r in doc]
    if len({len(r) for r in data}) != 1:
        raise ValidationError("matrix.shape", "matrix rows have different lengths")
    return IntMatrix(len(data), len(data[0]), tuple(data))


def parse_element(doc: Any, m: int, n: int) -> FatfElement:
    return FatfElement(parse_vector(_need(doc, "vec"), m, "vec"), parse_word(_need(doc, "word"), n))


def parse_subgroup(doc: Any, m: int, n: int) -> list[FatfElement]:
    if isinstance(doc, dict):
        doc = doc.get("generators", doc.get("subgroup"))
    if not isinstance(doc, list):
        raise DocumentError("subgroup must be a list of elements")
    return [parse_element(e, m, n) for e in doc]


def parse_endo(doc: Any, m: int, n: int) -> Endomorphism:
    kind = _need(doc, "type", str)
    Q = parse_matrix(_need(doc, "Q"), m, m, "Q")
    P = parse_matrix(_need(doc, "P"), n, m, "P")
    if kind == "I":
        phi = _need(doc, "phi", list)
        if len(phi) != n:
            raise ValidationError("phi.length", f"phi needs {n} letter images")
        return TypeIEndo(tuple(parse_word(w, n) for w in phi), Q, P)
    if kind == "II":
        z = parse_word(_need(doc, "z"), n)
        ell = parse_vector(_need(doc, "ell"), m, "ell")
        h = parse_vector(_need(doc, "h"), n, "h")
        try:
            return TypeIIEndo(z, ell, h, Q, P)
        except ValueError as exc:
            raise ValidationError("type_ii", str(exc)) from None
    raise DocumentError(f"unknown endomorphism type {kind!r}")


def parse_oracle(doc: Any, n: int) -> OracleSet:
    endos = _need(doc, "endos", list)
    bases = _need(doc, "fix_bases", list)
    images = []
    for e in endos:
        imgs = _need(e, "images", list)
        images.append(tuple(parse_word(w, n) for w in imgs))
    fix = []
    for b in bases:
        if not isinstance(b, list):
            raise DocumentError("each fixed-subgroup basis must be a list of words")
        fix.append(tuple(parse_word(w, n) for w in b))
    if len(images) != len(fix):
        raise ValidationError("oracle.length", "one fixed-subgroup basis is needed per endomorphism")
    return OracleSet(tuple(images), tuple(fix), n)


def parse_family(doc: Any, m: int, n: int) -> TypeIFamily:
    pairs = []
    for p in _need(doc, "pairs", list):
        pairs.append((parse_matrix(_need(p, "Q"), m, m, "Q"), parse_matrix(_need(p, "P"), n, m, "P")))
    free = _need(doc, "free_part", list)
    K = build([parse_word(w, n) for w in free], n)[1]
    return TypeIFamily(tuple(pairs), K, m)


# ---------------------------------------------------------------------------
# Serialization

def word_doc(w: Word) -> list[int]:
    return list(w.letters)


def matrix_doc(A: IntMatrix) -> list[list[int]]:
    return A.tolist()


def element_doc(x: FatfElement) -> dict:
    return {"vec": list(x.vec), "word": word_doc(x.word)}


def endo_doc(e: Endomorphism) -> dict:
    if isinstance(e, TypeIEndo):
        return {"type": "I", "phi": [word_doc(w) for w in e.phi], "Q": matrix_doc(e.Q), "P": matrix_doc(e.P)}
    return {"type": "II", "z": word_doc(e.z), "ell": list(e.ell), "h": list(e.h),
            "Q": matrix_doc(e.Q), "P": matrix_doc(e.P)}


def basis_doc(S: SubgroupBasis) -> dict:
    return {
        "ambient": [S.m, S.n],
        "decorated": [{"vec": list(a), "word": word_doc(u)} for a, u in S.decorated],
        "lattice": [list(b) for b in S.lattice.vectors],
    }


def parse_basis(doc: Any) -> SubgroupBasis:
    m, n = _ints(_need(doc, "ambient"), "ambient")
    gens = [parse_element(e, m, n) for e in _need(doc, "decorated", list)]
    gens += [FatfElement(parse_vector(b, m, "lattice vector"), Word.identity(n))
             for b in _need(doc, "lattice", list)]
    return subgroup_basis(gens, m, n)


def fix_result_doc(res: FixResult) -> dict:
    return {
        "verdict": res.verdict,
        "basis": basis_doc(res.basis) if res.basis is not None else None,
        "witness": list(res.witness) if res.witness is not None else None,
    }


def parse_fix_result(doc: Any) -> FixResult:
    basis = doc.get("basis")
    witness = doc.get("witness")
    fg = _need(doc, "verdict", str) == "finitely_generated"
    return FixResult(fg, parse_basis(basis) if basis is not None else None,
                     tuple(witness) if witness is not None else None)


def _lattice_doc(L: Lattice) -> list[list[int]]:
    return [list(v) for v in L.vectors]


def _opt(v):
    return list(v) if v is not None else None


def case_doc(c: AbelianCaseData) -> dict:
    return {
        "case": c.case_tag,
        "Btilde": _lattice_doc(c.Btilde),
        "C": _lattice_doc(c.C),
        "z": word_doc(c.z) if c.z is not None else None,
        "r": c.r,
        "a": _opt(c.a), "b": _opt(c.b), "c": _opt(c.c),
        "alpha": c.alpha, "alpha1": c.alpha1, "alpha2": c.alpha2,
        "r_prime": c.r_prime, "c_prime": _opt(c.c_prime),
    }


def parse_case(doc: Any, m: int, n: int) -> AbelianCaseData:
    tup = lambda v: tuple(v) if v is not None else None
    return AbelianCaseData(
        doc["case"], Lattice.span(doc["Btilde"], m), Lattice.span(doc["C"], m),
        parse_word(doc["z"], n) if doc["z"] is not None else None, doc["r"],
        tup(doc["a"]), tup(doc["b"]), tup(doc["c"]),
        doc["alpha"], doc["alpha1"], doc["alpha2"], doc["r_prime"], tup(doc["c_prime"]))


def closure_doc(res: ClosureResult, m: int, n: int) -> dict:
    nonabelian = res.case is None
    return {
        "ambient": [m, n],
        "verdict": res.verdict,
        "basis": basis_doc(res.closure) if res.closure is not None else None,
        "non_fg_witness": _opt(res.non_fg_witness),
        "witnesses": [endo_doc(e) for e in res.witnesses],
        "qp_pairs": [{"Q": matrix_doc(Q), "P": matrix_doc(P)} for Q, P in res.qp_pairs],
        "case": case_doc(res.case) if res.case is not None else None,
        "k": res.oracle_size if nonabelian else None,
        "q": res.q if nonabelian else None,
        "trust": res.trust,
    }


def parse_closure(doc: Any) -> ClosureResult:
    m, n = _ints(_need(doc, "ambient"), "ambient")
    basis = doc.get("basis")
    return ClosureResult(
        parse_basis(basis) if basis is not None else None,
        tuple(parse_endo(e, m, n) for e in doc["witnesses"]),
        tuple((parse_matrix(p["Q"], m, m, "Q"), parse_matrix(p["P"], n, m, "P")) for p in doc["qp_pairs"]),
        parse_case(doc["case"], m, n) if doc["case"] is not None else None,
        doc["k"] or 0,
        tuple(doc["non_fg_witness"]) if doc["non_fg_witness"] is not None else None,
        doc["trust"],
    )


def endo_fixed_doc(v: EndoFixedVerdict, m: int, n: int) -> dict:
    return {
        "endo_fixed": v.endo_fixed,
        "certificate": element_doc(v.certificate) if v.certificate is not None else None,
        "closure": closure_doc(v.closure, m, n),
    }


def snf_doc(s: SmithDecomposition) -> dict:
    return {"U": matrix_doc(s.U), "V": matrix_doc(s.V), "D": matrix_doc(s.D),
            "invariants": list(s.invariants)}


def family_pairs_doc(pairs: Sequence[tuple[IntMatrix, IntMatrix]]) -> list[dict]:
    return [{"Q": matrix_doc(Q), "P": matrix_doc(P)} for Q, P in pairs]

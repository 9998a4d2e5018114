"""Exact integer-matrix models and the evaluator on formal sums.

A model assigns a dimension to every object and an integer matrix of shape
``dims[cod] x dims[dom]`` to every declared hom. A word ``l1;...;ln``
evaluates to ``M(ln) @ ... @ M(l1)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import intmat
from .presentation import Presentation, all_composable_pairs, compose_lookup
from .rewrite import ProofTrace
from .terms import GEN, INV, THETA, FormalSum, Letter, Word

__all__ = [
    "MatrixModel",
    "ModelShapeError",
    "ModelFormatError",
    "ModelViolation",
    "ModelReport",
    "CONDITIONS",
    "validate_model",
    "evaluate",
    "evaluate_word",
    "sigma_matrix",
    "soundness_check_trace",
    "complete_model",
    "load_model",
    "parse_model",
    "dump_model",
    "random_model",
]

CONDITIONS = {
    "a": "composition table",
    "b": "homotopy invariance",
    "c": "stability (corner invertible)",
    "d": "split exactness (sigma invertible)",
    "e": "biproduct identity",
}


class ModelShapeError(ValueError):
    """A matrix has the wrong shape, or a dimension is missing or illegal."""


class ModelFormatError(ValueError):
    """The model file is not well-formed."""


class MatrixModel:
    """Dimensions per object plus one exact integer matrix per declared hom.

    Instances are treated as immutable; inverses are cached lazily.
    """

    def __init__(self, dims: Mapping[str, int], gens: Mapping[str, np.ndarray]):
        self.dims = dict(dims)
        self.gens = {k: intmat.as_matrix(v) for k, v in gens.items()}
        self._inverse_cache: dict[tuple[str, str], np.ndarray] = {}

    def __repr__(self):
        return f"MatrixModel(dims={self.dims}, gens={sorted(self.gens)})"

    def dim(self, obj: str) -> int:
        try:
            return self.dims[obj]
        except KeyError:
            raise ModelShapeError(f"no dimension for object {obj}") from None

    def matrix(self, p: Presentation, hom: str) -> np.ndarray:
        """M(hom), with identities and zero homs resolved implicitly."""
        dom, cod = p.hom_type(hom)
        if p.is_identity(hom):
            return intmat.identity(self.dim(dom))
        if p.is_zero_hom(hom):
            return intmat.zeros(self.dim(cod), self.dim(dom))
        try:
            return self.gens[hom]
        except KeyError:
            raise ModelShapeError(f"no matrix for hom {hom}") from None

    def _cached_inverse(self, key, build) -> np.ndarray:
        if key not in self._inverse_cache:
            self._inverse_cache[key] = intmat.inverse(build())
        return self._inverse_cache[key]

    def corner_inverse(self, p: Presentation, corner: str) -> np.ndarray:
        return self._cached_inverse(("inv", corner), lambda: self.matrix(p, p.corner(corner).emb))

    def theta(self, p: Presentation, name: str) -> np.ndarray:
        return self._cached_inverse(("theta", name), lambda: sigma_matrix(p, self, name))


@dataclass(frozen=True)
class ModelViolation:
    condition: str
    message: str
    residual: object = field(default=None, compare=False)

    def __str__(self):
        return f"({self.condition}) {CONDITIONS[self.condition]}: {self.message}"


@dataclass
class ModelReport:
    violations: list[ModelViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def add(self, condition: str, message: str, residual=None) -> None:
        self.violations.append(ModelViolation(condition, message, residual))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def sigma_matrix(p: Presentation, m: MatrixModel, name: str) -> np.ndarray:
    """M(f) M(pA) + M(s) M(pB) for the split-exact sequence ``name``."""
    s = p.splitexact(name)
    sd = p.sum_decl(s.sum)
    return m.matrix(p, s.f) @ m.matrix(p, sd.p_left) + m.matrix(p, s.s) @ m.matrix(p, sd.p_right)


def _check_shapes(p: Presentation, m: MatrixModel) -> None:
    for o in p.objects:
        d = m.dims.get(o.name)
        if d is None:
            raise ModelShapeError(f"no dimension for object {o.name}")
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise ModelShapeError(f"dimension of {o.name} must be a nonnegative integer, got {d!r}")
        if o.is_zero and d != 0:
            raise ModelShapeError(f"zero object {o.name} must have dimension 0, got {d}")
    for h in p.homs:
        if h.name not in m.gens:
            raise ModelShapeError(f"no matrix for hom {h.name}")
        want = (m.dims[h.cod], m.dims[h.dom])
        got = m.gens[h.name].shape
        if got != want:
            raise ModelShapeError(f"{h.name} : {h.dom} -> {h.cod} needs shape {want[0]}x{want[1]}, got {got[0]}x{got[1]}")
    unknown = sorted(set(m.gens) - set(p.hom_names))
    if unknown:
        raise ModelShapeError(f"matrices given for undeclared homs: {', '.join(unknown)}")


def validate_model(p: Presentation, m: MatrixModel) -> ModelReport:
    """Check conditions (a)-(e); shape problems raise ModelShapeError instead."""
    _check_shapes(p, m)
    report = ModelReport()
    for f, g in all_composable_pairs(p):
        h = compose_lookup(p, f, g)
        lhs = m.matrix(p, g) @ m.matrix(p, f)
        rhs = m.matrix(p, h)
        if not intmat.equal(lhs, rhs):
            report.add("a", f"M({g}) M({f}) != M({h}) for {f} ; {g} = {h}", lhs - rhs)
    for hp in p.homotopies:
        a, b = m.matrix(p, hp.f0), m.matrix(p, hp.f1)
        if not intmat.equal(a, b):
            report.add("b", f"M({hp.f0}) != M({hp.f1})", a - b)
    for c in p.corners:
        mc = m.matrix(p, c.emb)
        if mc.shape[0] != mc.shape[1]:
            report.add("c", f"M({c.emb}) is {mc.shape[0]}x{mc.shape[1]}, not square")
        elif not intmat.is_unimodular(mc):
            report.add("c", f"det M({c.emb}) = {intmat.det(mc)}, not +-1")
    for s in p.splitexacts:
        ms = sigma_matrix(p, m, s.name)
        if ms.shape[0] != ms.shape[1]:
            report.add("d", f"sigma for {s.name} is {ms.shape[0]}x{ms.shape[1]}, not square")
        elif not intmat.is_unimodular(ms):
            report.add("d", f"det of sigma for {s.name} is {intmat.det(ms)}, not +-1")
    for sd in p.sums:
        total = (
            m.matrix(p, sd.i_left) @ m.matrix(p, sd.p_left)
            + m.matrix(p, sd.i_right) @ m.matrix(p, sd.p_right)
        )
        eye = intmat.identity(m.dim(sd.sum_object))
        if not intmat.equal(total, eye):
            report.add(
                "e",
                f"M({sd.i_left}) M({sd.p_left}) + M({sd.i_right}) M({sd.p_right}) != I on {sd.sum_object}",
                total - eye,
            )
    return report


# -- evaluation -------------------------------------------------------------


def _letter_matrix(p: Presentation, m: MatrixModel, letter: Letter) -> np.ndarray:
    if letter.kind == GEN:
        return m.matrix(p, letter.name)
    if letter.kind == INV:
        return m.corner_inverse(p, letter.name)
    if letter.kind == THETA:
        return m.theta(p, letter.name)
    raise ValueError(f"unknown letter kind {letter.kind!r}")


def evaluate_word(p: Presentation, m: MatrixModel, w: Word) -> np.ndarray:
    out = intmat.identity(m.dim(w.dom))
    for letter in w.letters:
        out = _letter_matrix(p, m, letter) @ out
    return out


def evaluate(p: Presentation, m: MatrixModel, s: FormalSum) -> np.ndarray:
    """The signed sum of word values; the empty sum is the zero matrix."""
    out = intmat.zeros(m.dim(s.cod), m.dim(s.dom))
    for t in s.terms:
        out = out + t.sign * evaluate_word(p, m, t.word)
    return out


def soundness_check_trace(p: Presentation, m: MatrixModel, trace: ProofTrace) -> bool:
    """True iff every state along the trace has the same value in ``m``."""
    states = trace.states()
    first = evaluate(p, m, states[0])
    return all(intmat.equal(first, evaluate(p, m, s)) for s in states[1:])


# -- model files ------------------------------------------------------------


def complete_model(p: Presentation, dims: Mapping[str, int], gens: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Fill in homs missing from ``gens`` that the table expresses as composites of known ones."""
    gens = dict(gens)

    def known(h):
        return p.is_identity(h) or p.is_zero_hom(h) or h in gens

    def mat(h):
        dom, cod = p.hom_type(h)
        if p.is_identity(h):
            return intmat.identity(dims[dom])
        if p.is_zero_hom(h):
            return intmat.zeros(dims[cod], dims[dom])
        return gens[h]

    changed = True
    while changed:
        changed = False
        for (f, g), h in p.table:
            if h in p._homs and h not in gens and known(f) and known(g):
                gens[h] = mat(g) @ mat(f)
                changed = True
    return gens


def parse_model(p: Presentation, text: str) -> MatrixModel:
    """Read a JSON model ``{"dims": {...}, "gens": {...}}`` and complete derived homs."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("dims"), dict) or not isinstance(data.get("gens", {}), dict):
        raise ModelFormatError('expected an object with "dims" and "gens" maps')
    dims = data["dims"]
    for k in dims:
        if not p.has_object(k):
            raise ModelShapeError(f"dimension given for undeclared object {k}")
    for o in p.objects:
        if o.name not in dims:
            raise ModelShapeError(f"no dimension for object {o.name}")
    gens = {}
    for name, rows in data.get("gens", {}).items():
        if name not in p._homs:
            raise ModelShapeError(f"matrix given for undeclared hom {name}")
        h = p.hom(name)
        shape = (dims[h.cod], dims[h.dom])
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ModelFormatError(f"matrix for {name} must be a list of rows")
        try:
            gens[name] = intmat.as_matrix(rows, shape)
        except (TypeError, ValueError) as exc:
            raise ModelShapeError(f"{name}: {exc}") from None
    return MatrixModel(dims, complete_model(p, dims, gens))


def load_model(p: Presentation, path) -> MatrixModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(p, fh.read())


def dump_model(p: Presentation, m: MatrixModel) -> str:
    data = {
        "dims": {o: m.dims[o] for o in p.object_names},
        "gens": {h: intmat.to_lists(m.gens[h]) for h in p.hom_names if h in m.gens},
    }
    return json.dumps(data, indent=2)


# -- random models ----------------------------------------------------------


def _derived_homs(p: Presentation) -> set[str]:
    """Homs the table defines as a composite of two earlier declared homs."""
    order = {h: i for i, h in enumerate(p.hom_names)}
    derived = set()
    for (f, g), h in p.table:
        if h in order and f in order and g in order and order[f] < order[h] and order[g] < order[h]:
            derived.add(h)
    return derived


def _random_dims(p: Presentation, rng: random.Random, max_dim: int) -> dict[str, int]:
    parent = {o: o for o in p.object_names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for r in p.representatives:
        union(r.object, r.rep)
    for c in p.corners:
        dom, cod = p.hom_type(c.emb)
        union(dom, cod)
    sums = [(sd.sum_object, sd.left, sd.right) for sd in p.sums]
    for s in p.splitexacts:
        sd = p.sum_decl(s.sum)
        sums.append((p.hom_type(s.g)[0], sd.left, sd.right))

    value: dict[str, int] = {}
    for o in p.objects:
        if o.is_zero:
            value[find(o.name)] = 0
    targets = {find(t) for t, _, _ in sums}
    classes = []
    for o in p.object_names:
        if find(o) not in classes:
            classes.append(find(o))
    while any(c not in value for c in classes):
        progress = False
        for t, a, b in sums:
            if find(t) not in value and find(a) in value and find(b) in value:
                value[find(t)] = value[find(a)] + value[find(b)]
                progress = True
        if progress:
            continue
        free = [c for c in classes if c not in value and c not in targets]
        pick = free[0] if free else next(c for c in classes if c not in value)
        value[pick] = rng.randint(1, max_dim)
    dims = {o: value[find(o)] for o in p.object_names}
    for t, a, b in sums:
        if dims[t] != dims[a] + dims[b]:
            raise ValueError(f"no consistent dimensions: {t} must be {a} (+) {b}")
    return dims


def _random_matrix(rows: int, cols: int, rng: random.Random, bound: int = 2) -> np.ndarray:
    out = intmat.zeros(rows, cols)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = rng.randint(-bound, bound)
    return out


def random_model(p: Presentation, rng: random.Random, max_dim: int = 2, attempts: int = 20) -> MatrixModel:
    """A valid model built so that (a)-(e) hold by construction.

    Structural homs (sums, split-exact data, representative isos, corners)
    receive conjugated block forms; homs the table defines as composites are
    computed from their factors; the rest are random. Raises ValueError if no
    valid model turns up within ``attempts`` tries.
    """
    last = None
    for _ in range(attempts):
        m = _random_model_once(p, rng, max_dim)
        report = validate_model(p, m)
        if report.ok:
            return m
        last = report
    raise ValueError(f"could not build a valid random model:\n{last}")


def _random_model_once(p: Presentation, rng: random.Random, max_dim: int) -> MatrixModel:
    dims = _random_dims(p, rng, max_dim)
    derived = _derived_homs(p)
    gens: dict[str, np.ndarray] = {}

    def free(h):
        return h in p._homs and h not in derived and h not in gens

    def known(h):
        return p.is_identity(h) or p.is_zero_hom(h) or h in gens

    def mat(h):
        return MatrixModel(dims, gens).matrix(p, h)

    for sd in p.sums:
        a, b = dims[sd.left], dims[sd.right]
        u = intmat.random_unimodular(a + b, rng)
        ui = intmat.inverse(u)
        for h, val in ((sd.i_left, u[:, :a]), (sd.i_right, u[:, a:]), (sd.p_left, ui[:a, :]), (sd.p_right, ui[a:, :])):
            if free(h):
                gens[h] = val
    for s in p.splitexacts:
        sd = p.sum_decl(s.sum)
        a, b = dims[sd.left], dims[sd.right]
        v = intmat.random_unimodular(a + b, rng)
        vi = intmat.inverse(v)
        x = _random_matrix(a, b, rng)
        lifted = v @ np.vstack([x, intmat.identity(b)]).astype(object) if a + b else intmat.zeros(0, b)
        for h, val in ((s.f, v[:, :a]), (s.g, vi[a:, :]), (s.s, lifted)):
            if free(h):
                gens[h] = val
    for r in p.representatives:
        if free(r.iso):
            w = intmat.random_unimodular(dims[r.object], rng)
            gens[r.iso] = w
            if free(r.iso_inv):
                gens[r.iso_inv] = intmat.inverse(w)
    for c in p.corners:
        if free(c.emb):
            gens[c.emb] = intmat.random_unimodular(dims[p.hom_type(c.emb)[0]], rng)
    gens = complete_model(p, dims, gens)
    for r in p.representatives:
        for link in r.corner_links:
            c2 = p.corner(link.target).emb
            if free(link.stab_iso) and known(r.iso) and known(link.corner) and known(c2):
                c = p.corner(link.corner).emb
                gens[link.stab_iso] = mat(c2) @ mat(r.iso) @ intmat.inverse(mat(c))
    gens = complete_model(p, dims, gens)
    for hp in p.homotopies:
        if known(hp.f0) and free(hp.f1):
            gens[hp.f1] = mat(hp.f0)
        elif known(hp.f1) and free(hp.f0):
            gens[hp.f0] = mat(hp.f1)
    for h in p.homs:
        if free(h.name):
            gens[h.name] = _random_matrix(dims[h.cod], dims[h.dom], rng)
            gens = complete_model(p, dims, gens)
    for hp in p.homotopies:
        if not known(hp.f1):
            gens[hp.f1] = mat(hp.f0)
    gens = complete_model(p, dims, gens)
    missing = [h for h in p.hom_names if h not in gens]
    if missing:
        raise ValueError(f"random model left homs unassigned: {', '.join(missing)}")
    return MatrixModel(dims, gens)

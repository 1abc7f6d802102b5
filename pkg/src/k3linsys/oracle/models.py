"""Concrete K3 models over F_p: a quartic in P^3 (n=4) and a double sextic plane (n=2).

Both models share one affine picture.  Around a point the chart coordinate
``x_c`` is set to 1 and the remaining three affine variables are tied by one
equation ``F = 0``; sections of ``O(d)`` become polynomials in those three
variables (``AffinePicture.basis``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from pathlib import Path
from typing import Optional

import numpy as np

from .field import Poly, check_prime, derive_seed, poly_diff, poly_eval, square_root, univariate_roots

QUARTIC = "quartic"
DOUBLE_PLANE = "double-plane"
VARIANTS = {QUARTIC: 4, DOUBLE_PLANE: 2}

DEFAULT_PRIME = 1_000_003
SECOND_PRIME = 2_000_003
DOUBLE_PLANE_MAX_DEGREE = 5
# generic choices need room; lower it for experiments on small fields
MIN_PRIME = 10 ** 6


class SamplingError(RuntimeError):
    """No smooth point found within the retry budget."""


class NoModelError(ValueError):
    """No concrete model is available for this polarization degree."""


class ModelError(ValueError):
    """Malformed model description."""


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total ``degree`` in ``nvars`` variables (fixed order)."""
    if degree < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        out.append(tuple(exps))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class SurfacePoint:
    coords: tuple[int, ...]
    w: Optional[int] = None

    def to_dict(self) -> dict:
        out = {"coords": list(self.coords)}
        if self.w is not None:
            out["w"] = self.w
        return out


@dataclass(frozen=True)
class AffinePicture:
    """Affine data at a point: base values, equation and section basis."""

    base: tuple[int, int, int]
    equation: Poly
    basis: list[tuple[int, int, int]]
    dependent_candidates: tuple[int, ...]


@dataclass(frozen=True)
class K3ModelSpec:
    variant: str
    prime: int
    form: dict = field(compare=False)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ModelError(f"unknown variant {self.variant!r}; expected one of {sorted(VARIANTS)}")
        check_prime(self.prime)
        if self.prime <= MIN_PRIME:
            raise ModelError(f"model prime must exceed {MIN_PRIME}, got {self.prime}")
        nvars, deg = (4, 4) if self.variant == QUARTIC else (3, 6)
        clean = {}
        for exps, c in self.form.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or sum(exps) != deg:
                raise ModelError(f"term {exps} is not a degree-{deg} monomial in {nvars} variables")
            if c % self.prime:
                clean[exps] = (clean.get(exps, 0) + c) % self.prime
        if not clean:
            raise ModelError("defining form is zero")
        object.__setattr__(self, "form", clean)

    @property
    def n(self) -> int:
        return VARIANTS[self.variant]

    @property
    def is_random(self) -> bool:
        return self.seed is not None

    @classmethod
    def random(cls, variant: str, prime: int = DEFAULT_PRIME, seed: int = 0) -> "K3ModelSpec":
        nvars, deg = (4, 4) if variant == QUARTIC else (3, 6)
        rng = np.random.default_rng(derive_seed(seed, variant, prime, "model"))
        form = {e: int(rng.integers(1, prime)) for e in monomials(nvars, deg)}
        return cls(variant, prime, form, seed)

    def reseeded(self, prime: int, seed: int) -> "K3ModelSpec":
        """Fresh random model on another prime; fixed models keep their form."""
        if self.is_random:
            return K3ModelSpec.random(self.variant, prime, seed)
        return K3ModelSpec(self.variant, prime, dict(self.form))

    def basis_dim(self, d: int) -> int:
        return model_basis_dim(self, d)

    def ambient_monomials(self, d: int) -> list[tuple[int, ...]]:
        """Homogeneous basis exponents; double plane entries end with the power of w."""
        if self.variant == QUARTIC:
            return monomials(4, d)
        if d > DOUBLE_PLANE_MAX_DEGREE:
            raise ModelError(f"double-plane model supports d <= {DOUBLE_PLANE_MAX_DEGREE}, got {d}")
        out = [e + (0,) for e in monomials(3, d)]
        out += [e + (1,) for e in monomials(3, d - 3)]
        return out

    def contains(self, pt: SurfacePoint) -> bool:
        p = self.prime
        if self.variant == QUARTIC:
            return poly_eval(self.form, pt.coords, p) == 0
        return (pt.w * pt.w - poly_eval(self.form, pt.coords, p)) % p == 0

    def gradient(self, pt: SurfacePoint) -> tuple[int, ...]:
        p = self.prime
        if self.variant == QUARTIC:
            return tuple(poly_eval(poly_diff(self.form, k, p), pt.coords, p) for k in range(4))
        grads = tuple((-poly_eval(poly_diff(self.form, k, p), pt.coords, p)) % p for k in range(3))
        return grads + ((2 * pt.w) % p,)

    def is_smooth_at(self, pt: SurfacePoint) -> bool:
        if self.variant == DOUBLE_PLANE:
            # w != 0 keeps the point off the branch curve, where (x,y) are local parameters
            return pt.w % self.prime != 0
        return any(self.gradient(pt))

    def sample_point(self, rng: np.random.Generator, max_attempts: int = 1000) -> SurfacePoint:
        p = self.prime
        for _ in range(max_attempts):
            xs = [int(v) for v in rng.integers(0, p, size=3)]
            if self.variant == QUARTIC:
                coeffs = [0] * 5
                for exps, c in self.form.items():
                    val = c
                    for x, e in zip(xs, exps[:3]):
                        val = val * pow(x, e, p) % p
                    coeffs[exps[3]] = (coeffs[exps[3]] + val) % p
                roots = univariate_roots(coeffs, p)
                if not roots:
                    continue
                t = roots[int(rng.integers(0, len(roots)))]
                pt = SurfacePoint(tuple(xs) + (t,))
            else:
                if not any(xs):
                    continue
                value = poly_eval(self.form, xs, p)
                root = square_root(value, p)
                if root is None:
                    continue
                if rng.integers(0, 2):
                    root = (-root) % p
                pt = SurfacePoint(tuple(xs), root)
            if any(pt.coords) and self.is_smooth_at(pt):
                return pt
        raise SamplingError(f"no smooth point on {self.variant} model over F_{p} after {max_attempts} attempts")

    def affine_picture(self, pt: SurfacePoint, d: int) -> AffinePicture:
        """Dehomogenize at the first nonzero coordinate of ``pt``."""
        p = self.prime
        c = next(i for i, x in enumerate(pt.coords) if x % p)
        inv = pow(pt.coords[c], -1, p)
        scaled = [x * inv % p for x in pt.coords]
        keep = [i for i in range(len(scaled)) if i != c]

        def drop(exps):
            return tuple(exps[i] for i in keep)

        if self.variant == QUARTIC:
            base = tuple(scaled[i] for i in keep)
            equation = {}
            for exps, coef in self.form.items():
                key = drop(exps)
                equation[key] = (equation.get(key, 0) + coef) % p
            basis = [drop(e) for e in self.ambient_monomials(d)]
            grads = [poly_eval(poly_diff(equation, k, p), base, p) for k in range(3)]
            candidates = tuple(k for k in range(3) if grads[k])
        else:
            w = pt.w * pow(inv, 3, p) % p
            base = tuple(scaled[i] for i in keep) + (w,)
            equation = {(0, 0, 2): 1}
            for exps, coef in self.form.items():
                key = drop(exps) + (0,)
                equation[key] = (equation.get(key, 0) - coef) % p
            basis = [drop(e[:3]) + (e[3],) for e in self.ambient_monomials(d)]
            candidates = (2,) if w else ()
        return AffinePicture(base, {k: v for k, v in equation.items() if v}, basis, candidates)

    def to_text(self) -> str:
        lines = [f"variant = {self.variant}", f"prime = {self.prime}"]
        if self.seed is not None:
            lines.append(f"seed = {self.seed}")
        for exps in sorted(self.form, reverse=True):
            lines.append(" ".join(map(str, exps)) + f"  {self.form[exps]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "K3ModelSpec":
        """Parse the model file format written by :meth:`to_text`.

        Lines are ``key = value`` headers (variant, prime, optional seed) or
        term lines ``e_0 ... e_k  coefficient``; ``#`` starts a comment.
        """
        headers: dict[str, str] = {}
        form: dict = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = (s.strip() for s in line.split("=", 1))
                headers[key] = value
                continue
            try:
                nums = [int(tok) for tok in line.split()]
            except ValueError as exc:
                raise ModelError(f"cannot parse term line {raw!r}") from exc
            exps, coef = tuple(nums[:-1]), nums[-1]
            form[exps] = form.get(exps, 0) + coef
        if "variant" not in headers:
            raise ModelError("model file lacks a 'variant' header")
        prime = int(headers.get("prime", DEFAULT_PRIME))
        seed = int(headers["seed"]) if "seed" in headers else None
        return cls(headers["variant"], prime, form, seed)

    @classmethod
    def load(cls, path) -> "K3ModelSpec":
        return cls.from_text(Path(path).read_text())


def fermat_quartic(prime: int = DEFAULT_PRIME) -> K3ModelSpec:
    return K3ModelSpec(QUARTIC, prime, {(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 4, 0): 1, (0, 0, 0, 4): 1})


def model_basis_dim(model: K3ModelSpec, d: int) -> int:
    """``h^0(O_S(dH))``; both formulas equal ``d^2 n / 2 + 2``."""
    if d <= 0:
        raise ValueError("basis dimension is defined here for d >= 1")
    if model.variant == QUARTIC:
        return comb(d + 3, 3) - (comb(d - 1, 3) if d >= 4 else 0)
    return comb(d + 2, 2) + (comb(d - 1, 2) if d >= 3 else 0)


def model_for_n(n: int, prime: int = DEFAULT_PRIME, seed: int = 0) -> K3ModelSpec:
    for variant, deg in VARIANTS.items():
        if deg == n:
            return K3ModelSpec.random(variant, prime, seed)
    raise NoModelError(f"no model for n={n}; available: n in {sorted(VARIANTS.values())}")

"""
Class membership (minimal order and strictness) and seeded generators of
certified instances for every operator family.
"""
from dataclasses import replace
import logging
from typing import Any, Dict, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from ..config.app_config import Config
from ..exceptions import (
    DimensionError,
    DomainError,
    GenerationError,
    LabException,
    PreconditionError,
)
from ..models.certificate import Certificate, HypothesisViolation
from ..models.class_spec import Classification, ClassSpec, Family
from ..models.conjugation import Conjugation
from ..models.instance import GeneratedInstance
from ..models.operator_pair import DKind, OperatorPair
from ..config.tolerance import ToleranceConfig
from ..utils.linalg import adjoint, as_matrix, direct_sum, frobenius, op_norm
from ..utils.random_matrices import (
    complex_gaussian,
    embed,
    haar_orthogonal,
    haar_unitary,
    jordan_nilpotent,
    make_rng,
    strictly_upper,
    unimodular,
    unimodular_diagonal,
    well_conditioned,
)
from .calculus_service import CalculusService
from .spectral_service import SpectralService

logger = logging.getLogger(__name__)

# (working-frame S, working-frame T or None for T = S*, parameters)
_Block = Tuple[np.ndarray, Optional[np.ndarray], Dict[str, Any]]


def _complex_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """exp(K) with K complex skew-symmetric: Eᵀ·E = I"""
    g = 0.5 * complex_gaussian(rng, (dim, dim))
    return sla.expm(g - g.T)


def _complex_symmetric(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = complex_gaussian(rng, (dim, dim))
    return (g + g.T) / 2


def _as_json_number(value: complex) -> Any:
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


class ClassService:
    """Service layer for class membership and instance generation"""

    def __init__(self, tol: Optional[ToleranceConfig] = None,
                 calculus: Optional[CalculusService] = None,
                 spectral: Optional[SpectralService] = None):
        self.tol = tol or ToleranceConfig()
        self.calculus = calculus or CalculusService(self.tol)
        self.spectral = spectral or SpectralService(self.tol, self.calculus)

    # Membership

    def _residual_pair(self, pair: OperatorPair, C: Optional[Conjugation]) -> OperatorPair:
        if C is None:
            return pair
        if C.dim != pair.dim:
            raise DimensionError(f"Conjugation acts on dimension {C.dim}, pair on {pair.dim}")
        return OperatorPair(pair.T, self.calculus.cmc(C, pair.S), pair.kind)

    def _family_of(self, pair: OperatorPair, C: Optional[Conjugation]) -> Family:
        partner = self.tol.is_zero(frobenius(pair.T - adjoint(pair.S)), frobenius(pair.S))
        return Family.for_pair(pair.kind, partner, C is not None)

    def classify(self, pair: OperatorPair, n: int, m_max: int,
                 C: Optional[Conjugation] = None) -> Classification:
        """
        Smallest m ≤ m_max with S*ⁿ·dᵐ(I)·Sⁿ ≈ 0 (right operand CSC when C is given).

        The order is strict when the residual one step below exceeds the
        looser strictness threshold; m = 1 is always strict.
        """
        if m_max < 1 or m_max > Config.MAX_ORDER:
            raise DomainError(f"m_max must lie in [1, {Config.MAX_ORDER}], got {m_max}")
        if n < 0:
            raise DomainError(f"Quasi exponent must be nonnegative, got {n}")

        family = self._family_of(pair, C)
        residual_pair = self._residual_pair(pair, C)
        certificates = []
        previous = None
        for m in range(1, m_max + 1):
            residual = self.calculus.quasi_residual(residual_pair, m, n, outer=pair.S)
            certificate = Certificate(
                spec=ClassSpec(family, m, n, C),
                residual_norm=residual.norm,
                scale=residual.scale,
                threshold=self.tol.zero_threshold(residual.scale),
                metadata={"order": m},
            )
            certificates.append(certificate)
            if certificate.passed:
                strict = previous is None or previous.norm > self.tol.strict_threshold(previous.scale)
                logger.debug("Classified as %s, strict=%s", certificate.spec.label(), strict)
                return Classification(minimal_m=m, strict=strict, certificates=tuple(certificates))
            previous = residual

        logger.debug("No order up to %d annihilates the quasi residual", m_max)
        return Classification(minimal_m=None, strict=False, certificates=tuple(certificates))

    def certify(self, spec: ClassSpec, S, T=None) -> Certificate:
        """Membership certificate of S (with partner T) in one class"""
        s = as_matrix(S, "S")
        if T is None:
            if not spec.family.adjoint_partner:
                raise PreconditionError(f"Family {spec.family.value} needs an explicit partner T")
            t = adjoint(s)
        else:
            t = as_matrix(T, "T")
        if not spec.is_complete:
            raise PreconditionError(f"Family {spec.family.value} needs a conjugation")

        pair = OperatorPair(t, s, spec.family.kind)
        residual = self.calculus.quasi_residual(self._residual_pair(pair, spec.conjugation),
                                                spec.m, spec.n, outer=s)
        violations = []
        if T is not None and spec.family.adjoint_partner:
            defect = frobenius(t - adjoint(s))
            if not self.tol.is_zero(defect, frobenius(s)):
                violations.append(HypothesisViolation("T = S*", defect))

        return Certificate(
            spec=spec,
            residual_norm=residual.norm,
            scale=residual.scale,
            threshold=self.tol.zero_threshold(residual.scale),
            hypothesis_violations=tuple(violations),
        )

    def is_power_bounded(self, S) -> bool:
        return self.spectral.is_power_bounded(S)

    @staticmethod
    def empirical_power_bound(S, horizon: Optional[int] = None) -> float:
        """sup over 0 ≤ k ≤ horizon of ‖Sᵏ‖₂"""
        s = as_matrix(S, "S")
        horizon = Config.POWER_HORIZON if horizon is None else horizon
        power = np.eye(s.shape[0], dtype=np.complex128)
        bound = 1.0
        for _ in range(horizon):
            power = power @ s
            bound = max(bound, op_norm(power))
        return bound

    # Generation

    def gen_conjugation(self, dim: int, seed: int,
                        block_dims: Optional[Tuple[int, int]] = None) -> Conjugation:
        """J = W·Wᵀ for a seeded unitary W, or J₁ ⊕ J₂ built blockwise"""
        if dim < 1:
            raise DimensionError(f"Dimension must be positive, got {dim}")
        rng = make_rng(seed)
        if block_dims is None:
            w = haar_unitary(rng, dim)
            return Conjugation(w @ w.T)

        if len(block_dims) != 2 or min(block_dims) < 0 or sum(block_dims) != dim:
            raise DimensionError(f"Block dimensions {tuple(block_dims)} do not split dimension {dim}")
        blocks = []
        for size in block_dims:
            if size:
                w = haar_unitary(rng, size)
                blocks.append(w @ w.T)
        return Conjugation(direct_sum(*blocks))

    def _isometric_block(self, rng, m: int, size: int, params: Dict[str, Any],
                         real: bool, orthogonal_tail: bool) -> _Block:
        k = min(params.get("k", (m + 1) // 2), size)
        c = params.get("jordan_scale", 1.0)
        u = params.get("u", float(rng.choice([-1.0, 1.0])) if real else unimodular(rng))
        head = u * (np.eye(k) + c * jordan_nilpotent(k))
        rest = size - k
        if rest == 0:
            return head, None, {"k": k, "u": _as_json_number(u)}
        if orthogonal_tail:
            tail = _complex_orthogonal(rng, rest)
        else:
            tail = haar_orthogonal(rng, rest) if real else unimodular_diagonal(rng, rest)
        return direct_sum(head, tail), None, {"k": k, "u": _as_json_number(u)}

    def _selfadjoint_block(self, rng, m: int, size: int, params: Dict[str, Any],
                           symmetric_tail: bool) -> _Block:
        k = min(params.get("k", (m + 1) // 2), size)
        c = params.get("jordan_scale", 1.0)
        a = float(params.get("shift", rng.uniform(-1.0, 1.0)))
        head = a * np.eye(k) + c * jordan_nilpotent(k)
        rest = size - k
        if rest == 0:
            return head.astype(np.complex128), None, {"k": k, "shift": a}
        tail = _complex_symmetric(rng, rest) if symmetric_tail else np.diag(rng.uniform(-1.0, 1.0, size=rest))
        return direct_sum(head, tail), None, {"k": k, "shift": a}

    def _pair_block(self, rng, kind: DKind, m: int, size: int, params: Dict[str, Any]) -> _Block:
        # S = V(cI ⊕ D)V⁻¹ and N = V(J_k ⊕ 0)V⁻¹ commute; T = S⁻¹ + N or T = S + N
        k = min(params.get("k", m), size)
        c = params.get("u", complex(np.exp(2j * np.pi * rng.uniform())) * rng.uniform(0.5, 2.0))
        values = rng.uniform(0.5, 2.0, size=size - k) * np.exp(2j * np.pi * rng.uniform(size=size - k))
        s_frame = np.diag(np.concatenate([np.full(k, c, dtype=np.complex128), values]))
        n_frame = embed(params.get("jordan_scale", 1.0) * jordan_nilpotent(k), size)
        if params.get("similarity", True):
            v = well_conditioned(rng, size)
            v_inv = np.linalg.inv(v)
        else:
            v = v_inv = np.eye(size, dtype=np.complex128)
        s = v @ s_frame @ v_inv
        nilpotent = v @ n_frame @ v_inv
        if kind is DKind.delta:
            t = np.linalg.inv(s) + nilpotent
        else:
            t = s + nilpotent
        return s, t, {"k": k}

    def _block(self, family: Family, rng, m: int, size: int, params: Dict[str, Any],
               real: bool, flat_conjugated: bool) -> _Block:
        if family in (Family.m_isometry, Family.mc_isometry):
            return self._isometric_block(rng, m, size, params, real, orthogonal_tail=flat_conjugated)
        if family in (Family.m_selfadjoint, Family.mc_symmetry):
            return self._selfadjoint_block(rng, m, size, params, symmetric_tail=flat_conjugated)
        return self._pair_block(rng, family.kind, m, size, params)

    _RECIPES = {
        Family.m_isometry: "isometry-jordan",
        Family.m_selfadjoint: "selfadjoint-jordan",
        Family.mc_isometry: "real-jordan-transported",
        Family.mc_symmetry: "real-jordan-transported",
        Family.left_m_invertible_pair: "inverse-plus-nilpotent",
        Family.m_intertwined_pair: "intertwined-plus-nilpotent",
    }

    def _flat_instance(self, spec: ClassSpec, dim: int, rng, params: Dict[str, Any]):
        conjugated = spec.family.uses_conjugation
        s, t, details = self._block(spec.family, rng, spec.m, dim, params, real=conjugated,
                                    flat_conjugated=conjugated and params.get("complex_tail", True))
        if spec.family.adjoint_partner and not conjugated and params.get("similarity", True):
            w = haar_unitary(rng, dim)
            s = w @ s @ adjoint(w)
            details["similarity"] = "unitary"
        return s, t, details

    def _quasi_lift(self, spec: ClassSpec, dim: int, rng, params: Dict[str, Any]):
        # S = [[S1, X], [0, N2]] with N2ⁿ = 0; only the corner block of dᵐ(I) survives the sandwich
        if dim < 2:
            raise GenerationError(f"An {spec.n}-quasi instance needs dimension at least 2, got {dim}")
        k_wanted = params.get("k", spec.m if not spec.family.adjoint_partner else (spec.m + 1) // 2)
        d2 = max(1, min(spec.n, dim - k_wanted))
        d1 = dim - d2
        real = spec.family.uses_conjugation

        s1, t1, details = self._block(spec.family, rng, spec.m, d1, params,
                                      real=real, flat_conjugated=False)
        tail = strictly_upper(rng, d2, real=real)
        if "coupling" in params:
            coupling = params["coupling"] * np.ones((d1, d2), dtype=np.complex128)
        elif real:
            coupling = rng.standard_normal((d1, d2)).astype(np.complex128)
        else:
            coupling = complex_gaussian(rng, (d1, d2))

        s = np.block([[s1, coupling], [np.zeros((d2, d1)), tail]])
        t = None
        if t1 is not None:
            upper = complex_gaussian(rng, (d1, d2))
            corner = complex_gaussian(rng, (d2, d2))
            t = np.block([[t1, upper], [np.zeros((d2, d1)), corner]])
        details.update({"d1": d1, "d2": d2})
        if not real and params.get("similarity", True):
            w = haar_unitary(rng, dim)
            s = w @ s @ adjoint(w)
            t = None if t is None else w @ t @ adjoint(w)
            details["similarity"] = "unitary"
        return s, t, details

    def gen_instance(self, spec: ClassSpec, dim: int, seed: int, **params: Any) -> GeneratedInstance:
        """
        Certified random instance of a class.

        Optional overrides: k (nilpotent block size), u (unimodular factor or
        invertible scalar), shift (real shift of selfadjoint blocks),
        jordan_scale, coupling (constant X block of a quasi lift), complex_tail
        (False keeps flat conjugated instances real before transport) and
        similarity (False keeps the working frame).
        """
        if dim < 1 or dim > Config.MAX_DIM:
            raise DimensionError(f"Dimension must lie in [1, {Config.MAX_DIM}], got {dim}")
        if spec.m > Config.MAX_ORDER:
            raise DomainError(f"Order {spec.m} exceeds the maximum {Config.MAX_ORDER}")
        if spec.conjugation is not None:
            logger.debug("Requested conjugation is replaced by a generated one")

        rng = make_rng(seed)
        try:
            # Step 1: build S and T in the frame where J = I
            if spec.is_quasi:
                s, t, details = self._quasi_lift(spec, dim, rng, params)
                recipe = f"quasi-lift/{self._RECIPES[spec.family]}"
            else:
                s, t, details = self._flat_instance(spec, dim, rng, params)
                recipe = self._RECIPES[spec.family]

            # Step 2: transport conjugated families by a unitary W, with J = W·Wᵀ
            conjugation = None
            if spec.family.uses_conjugation:
                w = haar_unitary(rng, dim) if params.get("similarity", True) else np.eye(dim, dtype=np.complex128)
                s = w @ s @ adjoint(w)
                conjugation = Conjugation(w @ w.T)
            if t is None:
                t = adjoint(s)
        except LabException:
            raise
        except (ValueError, np.linalg.LinAlgError) as e:
            raise GenerationError(f"Error generating {spec.label()}: {e}")

        # Step 3: certify independently
        certificate = self.certify(ClassSpec(spec.family, spec.m, spec.n, conjugation), s, t)
        metadata = {"recipe": recipe, "seed": int(seed), "dim": dim, "parameters": details}
        certificate = replace(certificate, metadata=metadata)
        if not certificate.passed:
            raise GenerationError(
                f"Generated {spec.label()} fails its certificate: "
                f"{certificate.residual_norm:.3e} > {certificate.threshold:.3e}"
            )
        logger.debug("Generated %s with recipe %s (seed %d)", spec.label(), recipe, seed)
        return GeneratedInstance(S=s, T=t, C=conjugation, certificate=certificate)

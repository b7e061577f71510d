"""
Explicit constructions on concrete matrices: the block decomposition along
range(Sⁿ) ⊕ ker(S*ⁿ), the similarity models (A, Q, P) and B, the left
inverses C_p, the Riesz selfadjointness criterion and the strictness
counterexample. Every construction returns a ConstructionCertificate.
"""
import logging
from math import comb
from typing import Dict, Optional, Tuple

import numpy as np

from ..builders.certificate_builder import CertificateBuilder
from ..config.app_config import Config
from ..exceptions import (
    DomainError,
    LabException,
    NumericalError,
    PreconditionError,
    SingularError,
)
from ..models.certificate import ConstructionCertificate
from ..models.class_spec import ClassSpec, Family
from ..models.conjugation import Conjugation
from ..models.operator_pair import DKind, OperatorPair
from ..models.quasi_blocks import QuasiBlocks
from ..config.tolerance import ToleranceConfig
from ..utils.linalg import (
    adjoint,
    as_matrix,
    commutator_defect,
    direct_sum,
    frobenius,
    kernel_basis,
    matrix_power,
    numerical_rank,
    op_norm,
    polar_decompose,
    psd_sqrt,
    psd_sqrt_inverse,
    rank_and_bases,
    require_same_shape,
)
from ..utils.random_matrices import derive_seed, make_rng
from .calculus_service import CalculusService
from .class_service import ClassService
from .spectral_service import SpectralService

logger = logging.getLogger(__name__)


class StructureService:
    """Service layer for the block decomposition and the similarity constructions"""

    def __init__(self, tol: Optional[ToleranceConfig] = None,
                 calculus: Optional[CalculusService] = None,
                 spectral: Optional[SpectralService] = None,
                 classes: Optional[ClassService] = None):
        self.tol = tol or ToleranceConfig()
        self.calculus = calculus or CalculusService(self.tol)
        self.spectral = spectral or SpectralService(self.tol, self.calculus)
        self.classes = classes or ClassService(self.tol, self.calculus, self.spectral)

    # Block decomposition

    def quasi_block_decompose(self, S, T, n: int) -> QuasiBlocks:
        """
        S and T in the orthonormal basis W = [range(Sⁿ) | ker(S*ⁿ)].

        The residuals map records how far the computed blocks are from the
        exact triangular shape; entries that only make sense when [S, T*] ≈ 0
        are recorded only in that case.
        """
        s, t = as_matrix(S, "S"), as_matrix(T, "T")
        dim = require_same_shape(S=s, T=t)
        if n < 1:
            raise DomainError(f"Quasi exponent must be positive, got {n}")

        s_power = matrix_power(s, n)
        scale = max(op_norm(s), 1.0) ** n
        d1, range_basis, cokernel_basis = rank_and_bases(s_power, self.tol, scale=scale)
        d2 = dim - d1
        w = np.hstack([range_basis, cokernel_basis])
        w_h = adjoint(w)

        s_w, t_w, power_w = w_h @ s @ w, w_h @ t @ w, w_h @ s_power @ w
        s1, s0, s2 = s_w[:d1, :d1], s_w[:d1, d1:], s_w[d1:, d1:]
        t1, t0, t2 = t_w[:d1, :d1], t_w[d1:, :d1], t_w[d1:, d1:]
        x = power_w[:d1, d1:]

        residuals: Dict[str, float] = {
            "s_lower_left": frobenius(s_w[d1:, :d1]),
            "sn_lower_rows": frobenius(power_w[d1:, :]),
            "s2_power": frobenius(matrix_power(s2, n)) if d2 else 0.0,
        }
        if d1:
            residuals["sn_corner"] = frobenius(power_w[:d1, :d1] - matrix_power(s1, n))
            formula = sum(
                (matrix_power(s1, n - 1 - j) @ s0 @ matrix_power(s2, j) for j in range(n)),
                np.zeros_like(x),
            )
            residuals["x_formula"] = frobenius(x - formula)

        _, commuting = commutator_defect(s, adjoint(t), self.tol)
        if commuting:
            residuals["t_upper_right"] = frobenius(t_w[:d1, d1:])
            residuals["s1_t1_commutator"] = frobenius(s1 @ adjoint(t1) - adjoint(t1) @ s1) if d1 else 0.0

        if d1 == 0:
            logger.info("Sⁿ vanishes for n=%d; the decomposition is degenerate", n)
        return QuasiBlocks(
            W=w, d1=d1, d2=d2, n=n,
            S1=s1, S0=s0, S2=s2, T1=t1, T0=t0, T2=t2,
            X=x, Sn=s_power, residuals=residuals,
            scale=max(frobenius(s), 1.0) ** n,
        )

    def _record_blocks(self, builder: CertificateBuilder, blocks: QuasiBlocks) -> None:
        for name, value in blocks.residuals.items():
            builder.add_residual(f"blocks_{name}", value, blocks.scale)
        builder.set_metadata(d1=blocks.d1, d2=blocks.d2)

    # Similarity models

    def _spectral_agreement(self, builder: CertificateBuilder, name: str, first: np.ndarray,
                            second: np.ndarray) -> None:
        """Matching distance of two spectra, allowing the ε^{1/k} spread of a k-fold pole"""
        gap = self.spectral.spectrum_distance(self.spectral.eigenvalues(first), self.spectral.eigenvalues(second))
        order = max(self.spectral.ascent_descent(second, c.value).pole_order
                    for c in self.spectral.eigen_data(second))
        scale = max(1.0, op_norm(second))
        spread = 10 * np.finfo(float).eps ** (1.0 / order)
        builder.add_residual(name, gap, scale, threshold=max(self.tol.cluster_rel, spread) * scale)

    def _similarity_model(self, blocks: QuasiBlocks) -> Dict[str, np.ndarray]:
        # S1ⁿ = U1·P1, A1 = P1·U1; A = [[A1, P1X], [0, 0]], Q = [[I, U1*X], [X*U1, X*X]], P = P1 ⊕ I
        d1, d2 = blocks.d1, blocks.d2
        u1, p1 = polar_decompose(matrix_power(blocks.S1, blocks.n), self.tol)
        x = blocks.X

        a_w = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
        a_w[:d1, :d1] = p1 @ u1
        a_w[:d1, d1:] = p1 @ x
        cross = adjoint(u1) @ x
        q_w = np.block([[np.eye(d1), cross], [adjoint(cross), adjoint(x) @ x]])
        p_w = direct_sum(p1, np.eye(d2)) if d2 else p1
        m_w = np.zeros_like(a_w)
        m_w[:d1, :d1] = u1
        m_w[:d1, d1:] = x

        w, w_h = blocks.W, adjoint(blocks.W)
        return {
            "A": w @ a_w @ w_h,
            "Q": w @ q_w @ w_h,
            "P": w @ p_w @ w_h,
            "M": m_w,
            "P1": p1,
        }

    def _similarity_core(self, builder: CertificateBuilder, kind: DKind, s: np.ndarray,
                         m: int, n: int, quasi_as_hypothesis: bool = True,
                         C: Optional[Conjugation] = None) -> Optional[Tuple[QuasiBlocks, Dict[str, np.ndarray]]]:
        """Shared part of the similarity constructions; None when the decomposition is degenerate"""
        # Step 1: the quasi residual of (S*, S) or (S*, CSC)
        pair = self.calculus.conjugated_pair(s, C, kind)
        quasi = self.calculus.quasi_residual(pair, m, n, outer=s)
        if quasi_as_hypothesis:
            builder.add_hypothesis("quasi_residual", quasi.norm, quasi.scale)
        else:
            builder.add_residual("quasi_residual", quasi.norm, quasi.scale)
        if kind is DKind.small_delta and numerical_rank(s, self.tol) < s.shape[0]:
            builder.add_hypothesis_violation("S injective")

        # Step 2: block decomposition
        blocks = self.quasi_block_decompose(s, adjoint(s), n)
        self._record_blocks(builder, blocks)
        if blocks.degenerate:
            builder.set_vacuous(f"S^{n} = 0: every block identity holds vacuously")
            return None

        # Step 3: polar data and the model (A, Q, P)
        power_corner = matrix_power(blocks.S1, n)
        if numerical_rank(power_corner, self.tol) < blocks.d1:
            builder.add_hypothesis_violation("S1ⁿ invertible")
            return None
        model = self._similarity_model(blocks)
        a, q, p = model["A"], model["Q"], model["P"]

        right = a if C is None else self.calculus.cmc(C, a)
        weighted = self.calculus.closed_sum(OperatorPair(adjoint(a), right, kind), q, m)
        builder.add_residual("weighted_residual", weighted.norm, weighted.scale)
        builder.add_residual("Q_psd", self.spectral.check_psd(q), max(frobenius(q), 1.0))

        s_power = blocks.Sn
        if kind is DKind.delta:
            similar = np.linalg.solve(p, a @ p)
            builder.add_residual("similarity", frobenius(s_power - similar),
                                 max(frobenius(s_power), frobenius(a)))
            self._spectral_agreement(builder, "spectra_A_Sn", a, s_power)
        else:
            builder.add_residual("intertwining", frobenius(a @ p - p @ s_power),
                                 frobenius(a) * frobenius(p) + frobenius(p) * frobenius(s_power))

        for name in ("A", "Q", "P"):
            builder.add_payload(name, model[name])
        builder.add_payload("W", blocks.W)
        return blocks, model

    def construct_AQP(self, kind: DKind, S, m: int, n: int) -> ConstructionCertificate:
        """
        Q ⪰ 0 and A with dᵐ_{A*,A}(Q) = 0 such that Sⁿ = P⁻¹AP (Delta)
        or AP = PSⁿ (SmallDelta).
        """
        try:
            s = as_matrix(S, "S")
            builder = CertificateBuilder(self.tol).set_name("similarity").set_metadata(kind=kind.value, m=m, n=n)
            self._similarity_core(builder, kind, s, m, n)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error constructing the similarity model: {e}")

    def _unitary_model(self, builder: CertificateBuilder, kind: DKind, s: np.ndarray,
                       model: Dict[str, np.ndarray], m: int, C: Optional[Conjugation] = None) -> None:
        """B = Q^{1/2}AQ^{-1/2} and L = Q^{1/2}P"""
        try:
            root = psd_sqrt(model["Q"], self.tol)
            root_inv = psd_sqrt_inverse(model["Q"], self.tol)
        except SingularError:
            raise PreconditionError("Q is singular: S must be left invertible (invertible at finite dimension)")
        b = root @ model["A"] @ root_inv
        lift = root @ model["P"]

        right = b if C is None else self.calculus.cmc(C, b)
        identity = np.eye(s.shape[0], dtype=np.complex128)
        unweighted = self.calculus.closed_sum(OperatorPair(adjoint(b), right, kind), identity, m)
        builder.add_residual("b_residual", unweighted.norm, unweighted.scale)

        s_power = np.linalg.solve(lift, b @ lift)
        target = model["Sn"]
        builder.add_residual("b_similarity", frobenius(target - s_power), max(frobenius(target), frobenius(b)))
        self._spectral_agreement(builder, "spectra_B_Sn", b, target)
        builder.add_payload("B", b)
        builder.add_payload("L", lift)

    def construct_B(self, kind: DKind, S, m: int, n: int) -> ConstructionCertificate:
        """Sⁿ = L⁻¹BL with dᵐ_{B*,B}(I) = 0 for invertible S"""
        try:
            s = as_matrix(S, "S")
            builder = CertificateBuilder(self.tol).set_name("similarity-unitary").set_metadata(kind=kind.value, m=m, n=n)

            # Step 1: left invertibility
            if numerical_rank(s, self.tol) < s.shape[0]:
                raise PreconditionError("S must be left invertible (invertible at finite dimension)")

            # Step 2: the weighted model
            core = self._similarity_core(builder, kind, s, m, n)
            if core is None:
                return builder.build()
            blocks, model = core
            model["Sn"] = blocks.Sn

            # Step 3: the unweighted model
            self._unitary_model(builder, kind, s, model, m)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error constructing the unweighted similarity model: {e}")

    def conjugation_block_defect(self, C: Conjugation, blocks: QuasiBlocks) -> float:
        """Size of the off-diagonal blocks of J in the basis W"""
        j_w = C.in_basis(blocks.W).J
        d1 = blocks.d1
        return frobenius(j_w[:d1, d1:]) + frobenius(j_w[d1:, :d1])

    def construct_conjugated(self, kind: DKind, S, C: Conjugation, m: int, n: int) -> ConstructionCertificate:
        """The similarity models for (m, C)-classes, with CQC = Q"""
        try:
            s = as_matrix(S, "S")
            if C.dim != s.shape[0]:
                raise PreconditionError(f"Conjugation acts on dimension {C.dim}, S on {s.shape[0]}")
            builder = CertificateBuilder(self.tol).set_name("conjugated").set_metadata(kind=kind.value, m=m, n=n)

            # Step 1: weighted model with conjugated residuals
            core = self._similarity_core(builder, kind, s, m, n, C=C)
            if core is None:
                return builder.build()
            blocks, model = core

            # Step 2: C = C1 ⊕ C2 and [C, M] = 0 in the basis W
            scale = float(np.sqrt(s.shape[0]))
            builder.add_hypothesis("C_block_diagonal", self.conjugation_block_defect(C, blocks), scale)
            j_w = C.in_basis(blocks.W).J
            m_w = model["M"]
            builder.add_hypothesis("C_M_commutator", frobenius(j_w @ np.conj(m_w) - m_w @ j_w),
                                   max(frobenius(m_w), 1.0) * scale)

            # Step 3: CQC = Q
            q = model["Q"]
            builder.add_residual("CQC", frobenius(self.calculus.cmc(C, q) - q), max(frobenius(q), 1.0))

            # Step 4: the unweighted model on the invertible branch
            if numerical_rank(s, self.tol) == s.shape[0]:
                model["Sn"] = blocks.Sn
                self._unitary_model(builder, kind, s, model, m, C=C)
            else:
                builder.add_note("S is not invertible: no unweighted model")
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error constructing the conjugated similarity model: {e}")

    def construct_perturbed_similarity(self, kind: DKind, S, N, m: int, n: int, n1: int) -> ConstructionCertificate:
        """
        (S+N)^{n+n1−1} is similar to A with d^{m+2n1−2}_{A*,A}(Q) = 0, for an n-quasi
        m-class S and a commuting nilpotent N of index n1.
        """
        try:
            s, nil = as_matrix(S, "S"), as_matrix(N, "N")
            require_same_shape(S=s, N=nil)
            if n1 < 1:
                raise DomainError(f"Nilpotency index must be positive, got {n1}")
            order = m + 2 * n1 - 2
            exponent = max(n + n1 - 1, 1)
            if order > Config.MAX_ORDER:
                raise DomainError(f"Perturbed order {order} exceeds the maximum {Config.MAX_ORDER}")
            builder = (CertificateBuilder(self.tol)
                       .set_name("perturbed-similarity")
                       .set_metadata(kind=kind.value, m=m, n=n, n1=n1, order=order, exponent=exponent))

            # Step 1: hypotheses on (S, N)
            base = self.calculus.quasi_residual(OperatorPair.adjoint_of(s, kind), m, n)
            builder.add_hypothesis("base_quasi_residual", base.norm, base.scale)
            power = matrix_power(nil, n1)
            builder.add_hypothesis("N_nilpotent", frobenius(power), max(frobenius(nil), 1.0) ** n1)
            magnitude, _ = commutator_defect(s, nil, self.tol)
            builder.add_hypothesis("[S,N]", magnitude, frobenius(s) * frobenius(nil))

            # Step 2: the similarity model of S + N at the perturbed order
            self._similarity_core(builder, kind, s + nil, order, exponent, quasi_as_hypothesis=False)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error constructing the perturbed similarity model: {e}")

    # Left inverses

    def left_inverse_Cp(self, T, S, m: int, p: int) -> ConstructionCertificate:
        """C_p = (−1)^{m+1} Σ_{j<m} (−1)ʲ C(m,j) T^{p(m−j)} S^{p(m−j−1)} with C_p·Sᵖ = I"""
        try:
            t, s = as_matrix(T, "T"), as_matrix(S, "S")
            dim = require_same_shape(T=t, S=s)
            if m < 1 or p < 1:
                raise DomainError(f"m and p must be positive, got m={m}, p={p}")
            builder = CertificateBuilder(self.tol).set_name("left-inverse").set_metadata(m=m, p=p)

            # Step 1: Δᵐ_{T,S}(I) = 0
            hypothesis = self.calculus.quasi_residual(OperatorPair(t, s, DKind.delta), m, 0)
            builder.add_hypothesis("left_m_inverse", hypothesis.norm, hypothesis.scale)

            # Step 2: C_p and C_p·Sᵖ − I
            t_p, s_p = matrix_power(t, p), matrix_power(s, p)
            c_p = np.zeros((dim, dim), dtype=np.complex128)
            term_scale = 0.0
            for j in range(m):
                term = (-1) ** j * comb(m, j) * matrix_power(t_p, m - j) @ matrix_power(s_p, m - j - 1)
                c_p = c_p + term
                term_scale = max(term_scale, frobenius(term))
            c_p = (-1) ** (m + 1) * c_p
            builder.add_residual("left_inverse", frobenius(c_p @ s_p - np.eye(dim)),
                                 max(term_scale * frobenius(s_p), 1.0))

            # Step 3: the norm bound for power bounded pairs
            norm = op_norm(c_p)
            builder.set_metadata(cp_norm=norm)
            if self.spectral.is_power_bounded(s) and self.spectral.is_power_bounded(t):
                bound = 2 ** m * self.classes.empirical_power_bound(s) * self.classes.empirical_power_bound(t)
                builder.add_bound("cp_norm_bound", norm, bound)
            else:
                builder.add_note("S or T is not power bounded: norm bound not evaluated")
            builder.add_payload("C_p", c_p)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error constructing the left inverse: {e}")

    # Riesz projections

    def riesz_selfadjoint_criterion(self, S, T, n: int, lam: complex,
                                    m: Optional[int] = None) -> ConstructionCertificate:
        """
        The Riesz projection at a pole λ is selfadjoint iff (S−λ)* kills
        ker(S−λ) (λ ≠ 0), or Sⁿ kills ker(S*ⁿ) (λ = 0). Passes when the
        criterion and the direct Hermitian test agree.
        """
        s, t = as_matrix(S, "S"), as_matrix(T, "T")
        dim = require_same_shape(S=s, T=t)
        if n < 1:
            raise DomainError(f"Quasi exponent must be positive, got {n}")
        cluster = self.spectral.locate(s, lam)
        builder = CertificateBuilder(self.tol).set_name("riesz").set_metadata(n=n, lam=[cluster.value.real, cluster.value.imag])

        # Step 1: hypotheses
        pair = OperatorPair(t, s, DKind.delta)
        if m is None:
            m = self.classes.classify(pair, n, Config.MAX_ORDER).minimal_m
        if m is None:
            builder.add_hypothesis_violation(f"{n}-quasi left m-invertible for some m ≤ {Config.MAX_ORDER}")
        else:
            quasi = self.calculus.quasi_residual(pair, m, n)
            builder.add_hypothesis("quasi_left_m_inverse", quasi.norm, quasi.scale)
            builder.set_metadata(m=m)
        magnitude, _ = commutator_defect(s, adjoint(t), self.tol)
        builder.add_hypothesis("[S,T*]", magnitude, frobenius(s) * frobenius(t))

        # Step 2: the criterion
        at_zero = abs(cluster.value) <= max(self.spectral.cluster_radius(s), self.tol.abs_floor)
        if at_zero:
            s_power = matrix_power(s, n)
            kernel = kernel_basis(adjoint(s_power), self.tol, scale=max(op_norm(s), 1.0) ** n)
            defect = frobenius(s_power @ kernel)
            defect_scale = max(op_norm(s), 1.0) ** n
        else:
            shifted = s - cluster.value * np.eye(dim)
            poles = self.spectral.ascent_descent(s, cluster.value)
            if poles.pole_order > 1:
                builder.add_hypothesis_violation("simple pole", float(poles.pole_order))
            kernel = kernel_basis(shifted, self.tol, scale=max(op_norm(shifted), 1.0))
            defect = frobenius(adjoint(shifted) @ kernel)
            defect_scale = max(op_norm(shifted), 1.0)
        criterion = self.tol.is_zero(defect, defect_scale)

        # Step 3: the projection itself
        projection = self.spectral.riesz_projection(s, cluster.value)
        hermitian = self.spectral.is_hermitian(projection.matrix)
        if projection.warning:
            builder.add_note(projection.warning)

        builder.add_residual("verdict_mismatch", float(criterion != hermitian), 1.0, threshold=0.0)
        builder.set_metadata(criterion_defect=defect,
                             hermitian_defect=frobenius(projection.matrix - adjoint(projection.matrix)),
                             criterion_holds=criterion,
                             projection_selfadjoint=hermitian)
        builder.add_payload("P", projection.matrix)
        return builder.build()

    # Counterexample

    def _quasi_order(self, pair: OperatorPair, outer: np.ndarray, m_max: int) -> Optional[int]:
        for order in range(1, m_max + 1):
            residual = self.calculus.quasi_residual(pair, order, 1, outer=outer)
            if self.tol.is_zero(residual.norm, residual.scale):
                return order
        return None

    def strictness_counterexample(self, m: int, seed: int) -> ConstructionCertificate:
        """
        T1 a quasi left 1-inverse of S1 and T2 a strict left m-inverse of S2 whose
        product pair is a quasi left inverse of order below m.

        S = I ⊕ 0, S1 = cI ⊕ I, T1 = c⁻¹I ⊕ I, S2 = S21 ⊕ S22, T2 = T21 ⊕ T22
        with T21 a left (m−1)-inverse and T22 a strict left m-inverse.
        """
        if m < 2 or m > Config.MAX_ORDER:
            raise DomainError(f"The counterexample needs 2 ≤ m ≤ {Config.MAX_ORDER}, got {m}")
        rng = make_rng(seed)
        c = complex(np.exp(2j * np.pi * rng.uniform()) * rng.uniform(0.5, 2.0))

        upper = self.classes.gen_instance(ClassSpec(Family.left_m_invertible_pair, m - 1), m,
                                          derive_seed(seed, "counterexample", 1))
        lower = self.classes.gen_instance(ClassSpec(Family.left_m_invertible_pair, m), m,
                                          derive_seed(seed, "counterexample", 2))
        identity = np.eye(m, dtype=np.complex128)
        outer = direct_sum(identity, np.zeros((m, m)))
        s1, t1 = direct_sum(c * identity, identity), direct_sum(identity / c, identity)
        s2, t2 = direct_sum(upper.S, lower.S), direct_sum(upper.T, lower.T)

        builder = (CertificateBuilder(self.tol)
                   .set_name("strictness-counterexample")
                   .set_metadata(m=m, seed=int(seed)))

        # Step 1: the factors
        first = self.calculus.quasi_residual(OperatorPair(t1, s1, DKind.delta), 1, 1, outer=outer)
        builder.add_hypothesis("T1_quasi_left_1_inverse", first.norm, first.scale)
        second = self.classes.classify(OperatorPair(t2, s2, DKind.delta), 0, m)
        builder.add_residual("T2_order_gap", abs((second.minimal_m or m + 1) - m), 1.0, threshold=0.0)
        builder.add_residual("T2_not_strict", float(not second.strict), 1.0, threshold=0.0)

        # Step 2: the product is a quasi left m-inverse, but not a strict one
        product = OperatorPair(t1 @ t2, s1 @ s2, DKind.delta)
        conclusion = self.calculus.quasi_residual(product, m, 1, outer=outer)
        builder.add_residual("product_order_m", conclusion.norm, conclusion.scale)
        minimal = self._quasi_order(product, outer, m)
        builder.add_residual("product_order_excess", max(0, (minimal or m + 1) - (m - 1)), 1.0, threshold=0.0)
        builder.set_metadata(product_minimal_order=minimal)

        for name, matrix in (("S", outer), ("S1", s1), ("T1", t1), ("S2", s2), ("T2", t2)):
            builder.add_payload(name, matrix)
        return builder.build()

"""
Product and perturbation theorems checked on concrete instances.

Hypotheses and the conclusion are recorded separately, so an instance that
breaks a hypothesis comes out vacuous and never as a failure.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..builders.certificate_builder import CertificateBuilder
from ..config.app_config import Config
from ..exceptions import DomainError, LabException, NumericalError
from ..models.certificate import ConstructionCertificate
from ..models.conjugation import Conjugation
from ..models.operator_pair import DKind, OperatorPair
from ..config.tolerance import ToleranceConfig
from ..utils.linalg import (
    adjoint,
    as_matrix,
    commutator_defect,
    frobenius,
    kronecker,
    matrix_power,
    require_same_shape,
)
from .calculus_service import CalculusService
from .structure_service import StructureService

logger = logging.getLogger(__name__)


class TheoremService:
    """Service layer for the product and perturbation theorems"""

    def __init__(self, tol: Optional[ToleranceConfig] = None,
                 calculus: Optional[CalculusService] = None,
                 structure: Optional[StructureService] = None):
        self.tol = tol or ToleranceConfig()
        self.calculus = calculus or CalculusService(self.tol)
        self.structure = structure or StructureService(self.tol, self.calculus)

    def _commutators(self, builder: CertificateBuilder,
                     named: Sequence[Tuple[str, np.ndarray, np.ndarray]]) -> None:
        for name, a, b in named:
            magnitude, _ = commutator_defect(a, b, self.tol)
            builder.add_hypothesis(name, magnitude, frobenius(a) * frobenius(b))

    @staticmethod
    def _check_order(order: int) -> None:
        if order > Config.MAX_ORDER:
            raise DomainError(f"Order {order} exceeds the maximum {Config.MAX_ORDER}")

    # Products

    def _product(self, name: str, kind: DKind, S, S1, T1, S2, T2, m1: int, m2: int, n: int) -> CertificateBuilder:
        s, s1, t1, s2, t2 = (as_matrix(M, label) for M, label in
                             ((S, "S"), (S1, "S1"), (T1, "T1"), (S2, "S2"), (T2, "T2")))
        require_same_shape(S=s, S1=s1, T1=t1, S2=s2, T2=t2)
        if min(m1, m2) < 1 or n < 0:
            raise DomainError(f"Orders must be positive and n nonnegative, got m1={m1}, m2={m2}, n={n}")
        order = m1 + m2 - 1
        self._check_order(order)

        builder = (CertificateBuilder(self.tol)
                   .set_name(name)
                   .set_metadata(kind=kind.value, m1=m1, m2=m2, n=n, order=order))

        # Step 1: hypotheses
        first = self.calculus.quasi_residual(OperatorPair(t1, s1, kind), m1, n, outer=s)
        second = self.calculus.quasi_residual(OperatorPair(t2, s2, kind), m2, n, outer=s)
        builder.add_hypothesis("first_factor", first.norm, first.scale)
        builder.add_hypothesis("second_factor", second.norm, second.scale)
        self._commutators(builder, [
            ("[S,S1]", s, s1), ("[S,S2]", s, s2),
            ("[S,T1*]", s, adjoint(t1)), ("[S,T2*]", s, adjoint(t2)),
            ("[S1,S2]", s1, s2), ("[T1,T2]", t1, t2),
        ])

        # Step 2: conclusion, scaled by the norms of its factors
        conclusion = self.calculus.quasi_residual(OperatorPair(t1 @ t2, s1 @ s2, kind), order, n, outer=s,
                                                  propagated=True)
        builder.add_residual("conclusion", conclusion.norm, conclusion.scale)
        return builder

    def verify_product_theorem(self, kind: DKind, S, S1, T1, S2, T2, m1: int, m2: int,
                               n: int) -> ConstructionCertificate:
        """S*ⁿ·d^{m1+m2−1}_{T1T2,S1S2}(I)·Sⁿ = 0 under commuting hypotheses"""
        try:
            return self._product("product", kind, S, S1, T1, S2, T2, m1, m2, n).build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the product theorem: {e}")

    def product_tensor(self, kind: DKind, A1, B1, A2, B2, m1: int, m2: int, n: int) -> ConstructionCertificate:
        """d^{m1+m2−1}_{B1⊗B2, A1⊗A2} through the factors A1⊗I and I⊗A2, with S = A1⊗I"""
        try:
            a1, b1, a2, b2 = (as_matrix(M, label) for M, label in ((A1, "A1"), (B1, "B1"), (A2, "A2"), (B2, "B2")))
            require_same_shape(A1=a1, B1=b1)
            require_same_shape(A2=a2, B2=b2)
            left, right = np.eye(a1.shape[0]), np.eye(a2.shape[0])
            s1, t1 = kronecker(a1, right), kronecker(b1, right)
            s2, t2 = kronecker(left, a2), kronecker(left, b2)
            builder = self._product("product-tensor", kind, s1, s1, t1, s2, t2, m1, m2, n)

            product = OperatorPair(kronecker(b1, b2), kronecker(a1, a2), kind)
            outer = kronecker(a1, a2)
            residual = self.calculus.quasi_residual(product, m1 + m2 - 1, n, outer=outer, propagated=True)
            builder.add_residual("conclusion_outer_product", residual.norm, residual.scale)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the tensor product theorem: {e}")

    def product_conjugated(self, kind: DKind, S1, S2, C: Conjugation, m1: int, m2: int,
                           n: int = 0, S=None) -> ConstructionCertificate:
        """Products of (m, C)-classes: operands (Sᵢ*, CSᵢC)"""
        try:
            s1, s2 = as_matrix(S1, "S1"), as_matrix(S2, "S2")
            outer = np.eye(s1.shape[0], dtype=np.complex128) if S is None else as_matrix(S, "S")
            right1, right2 = self.calculus.cmc(C, s1), self.calculus.cmc(C, s2)
            builder = self._product("product-conjugated", kind, outer, right1, adjoint(s1),
                                    right2, adjoint(s2), m1, m2, n)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the conjugated product theorem: {e}")

    def product_isometric(self, S1, S2, m1: int, m2: int, n: int) -> ConstructionCertificate:
        """S1S2 is n-quasi (m1+m2−1)-isometric, read with the outer operator S1S2"""
        try:
            s1, s2 = as_matrix(S1, "S1"), as_matrix(S2, "S2")
            builder = self._product("product-isometric", DKind.delta, s1 @ s2, s1, adjoint(s1),
                                    s2, adjoint(s2), m1, m2, n)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the isometric product theorem: {e}")

    def product_selfadjoint(self, S1, S2, m1: int, m2: int, n: int = 0, S=None,
                            C: Optional[Conjugation] = None) -> ConstructionCertificate:
        """Products of m-selfadjoint operators, or of (m, C)-symmetries when C is given"""
        try:
            s1, s2 = as_matrix(S1, "S1"), as_matrix(S2, "S2")
            outer = np.eye(s1.shape[0], dtype=np.complex128) if S is None else as_matrix(S, "S")
            right1 = s1 if C is None else self.calculus.cmc(C, s1)
            right2 = s2 if C is None else self.calculus.cmc(C, s2)
            builder = self._product("product-selfadjoint", DKind.small_delta, outer, right1, adjoint(s1),
                                    right2, adjoint(s2), m1, m2, n)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the selfadjoint product theorem: {e}")

    # Perturbations

    def _nilpotent_hypothesis(self, builder: CertificateBuilder, name: str, N: np.ndarray, index: int) -> None:
        if index < 1:
            raise DomainError(f"Nilpotency index must be positive, got {index}")
        builder.add_hypothesis(name, frobenius(matrix_power(N, index)), max(frobenius(N), 1.0) ** index)

    def _perturbation(self, name: str, kind: DKind, S, T, N1, N2, m: int, n: int, n1: int, n2: int,
                      outer=None, perturbed_outer=None, flat: bool = False) -> CertificateBuilder:
        s, t, nil1, nil2 = (as_matrix(M, label) for M, label in ((S, "S"), (T, "T"), (N1, "N1"), (N2, "N2")))
        require_same_shape(S=s, T=t, N1=nil1, N2=nil2)
        outer = s if outer is None else as_matrix(outer, "outer operator")
        perturbed_outer = s + nil1 if perturbed_outer is None else as_matrix(perturbed_outer, "outer operator")
        order = m + n1 + n2 - 2
        exponent = 0 if flat else n + n1 - 1
        if m < 1 or n < 0:
            raise DomainError(f"Order must be positive and n nonnegative, got m={m}, n={n}")
        self._check_order(order)

        builder = (CertificateBuilder(self.tol)
                   .set_name(name)
                   .set_metadata(kind=kind.value, m=m, n=n, n1=n1, n2=n2, order=order, exponent=exponent))

        # Step 1: hypotheses
        base = self.calculus.quasi_residual(OperatorPair(t, s, kind), m, n, outer=outer)
        builder.add_hypothesis("base_quasi_residual", base.norm, base.scale)
        self._nilpotent_hypothesis(builder, "N1_nilpotent", nil1, n1)
        self._nilpotent_hypothesis(builder, "N2_nilpotent", nil2, n2)
        named = [("[S,N1]", s, nil1), ("[N2,T]", nil2, t)]
        if not flat:
            named += [("[S,T*]", outer, adjoint(t)), ("[N2*,S]", adjoint(nil2), outer)]
        self._commutators(builder, named)

        # Step 2: conclusion
        perturbed = OperatorPair(t + nil2, s + nil1, kind)
        conclusion = self.calculus.quasi_residual(perturbed, order, exponent, outer=perturbed_outer)
        builder.add_residual("conclusion", conclusion.norm, conclusion.scale)
        return builder

    def verify_perturbation_theorem(self, kind: DKind, S, T, N1, N2, m: int, n: int,
                                    n1: int, n2: int) -> ConstructionCertificate:
        """
        (S*+N1*)^{n+n1−1}·d^{m+n1+n2−2}_{T+N2,S+N1}(I)·(S+N1)^{n+n1−1} = 0.

        With n = 0 the flat statement d^{m+n1+n2−2}_{T+N2,S+N1}(I) = 0 is checked.
        """
        if n == 0:
            return self.perturbation_flat(kind, S, T, N1, N2, m, n1, n2)
        try:
            return self._perturbation("perturbation", kind, S, T, N1, N2, m, n, n1, n2).build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the perturbation theorem: {e}")

    def perturbation_flat(self, kind: DKind, S, T, N1, N2, m: int, n1: int, n2: int) -> ConstructionCertificate:
        """dᵐ_{T,S}(I) = 0, [S,N1] = 0 = [T,N2] give d^{m+n1+n2−2}_{T+N2,S+N1}(I) = 0"""
        try:
            builder = self._perturbation("perturbation-flat", kind, S, T, N1, N2, m, 0, n1, n2, flat=True)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the flat perturbation theorem: {e}")

    def perturbation_isometric(self, kind: DKind, S, N, m: int, n: int, n1: int) -> ConstructionCertificate:
        """T = S*, N2 = N1*: S+N is (n+n1−1)-quasi of order m+2n1−2"""
        try:
            s, nil = as_matrix(S, "S"), as_matrix(N, "N")
            builder = self._perturbation("perturbation-isometric", kind, s, adjoint(s), nil, adjoint(nil),
                                         m, n, n1, n1)
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the isometric perturbation theorem: {e}")

    def perturbation_conjugated(self, kind: DKind, S, N, C: Conjugation, m: int, n: int,
                                n1: int) -> ConstructionCertificate:
        """
        (m, C)-classes perturbed by a nilpotent N commuting with S, with C block
        diagonal along range(Sⁿ) ⊕ ker(S*ⁿ). Decided at order m+2n1−2; the
        order m+2n−1 is evaluated as well and reported in the metadata.
        """
        try:
            s, nil = as_matrix(S, "S"), as_matrix(N, "N")
            right, right_nil = self.calculus.cmc(C, s), self.calculus.cmc(C, nil)
            builder = self._perturbation("perturbation-conjugated", kind, right, adjoint(s), right_nil,
                                         adjoint(nil), m, n, n1, n1, outer=s, perturbed_outer=s + nil)

            if n >= 1:
                blocks = self.structure.quasi_block_decompose(s, adjoint(s), n)
                if not blocks.degenerate:
                    builder.add_hypothesis("C_block_diagonal",
                                           self.structure.conjugation_block_defect(C, blocks),
                                           float(np.sqrt(s.shape[0])))

            alternative = m + 2 * n - 1
            exponent = n + n1 - 1
            if 1 <= alternative <= Config.MAX_ORDER:
                perturbed = OperatorPair(adjoint(s + nil), right + right_nil, kind)
                residual = self.calculus.quasi_residual(perturbed, alternative, exponent, outer=s + nil)
                builder.set_metadata(alternative_order=alternative,
                                     alternative_residual=residual.norm,
                                     alternative_vanishes=self.tol.is_zero(residual.norm, residual.scale))
            return builder.build()
        except LabException:
            raise
        except Exception as e:
            raise NumericalError(f"Error verifying the conjugated perturbation theorem: {e}")

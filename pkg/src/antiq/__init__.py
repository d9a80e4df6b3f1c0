"""Qudit Bloch geometry, antilinear superoperators and Theta-conjugations."""
from __future__ import annotations

from .antilinear import (AntilinearSuperOp, ChoiMatrix, LinearSuperOp, StinespringPair, adjoint,
                         antilinear_adjoint, antiunitary, apply, apply_choi, apply_local,
                         apply_natural, channel_report, choi, compose, conjugation, hill_wootters,
                         is_antilinear_channel, is_antilinear_CP, is_antilinear_TP, is_antiunitary,
                         is_unital, kraus_from_choi, mixed_antiunitary, natural_rep, stinespring,
                         tensor, weyl_covariant)
from .bloch import (BlochTensor, BlochVector, bloch_tensor, char_poly_coeffs, eigen_membership,
                    from_bloch, is_bloch_body, max_length_along, partial_trace, shrink_to_body,
                    to_bloch)
from .distribution import (Bipartition, DistributionCoefficients, distribution_coefficients,
                           linear_entropy, n_qubit_formula_check, qutrit_L2_check,
                           subset_weights, verify_distribution)
from .errors import AntiqError
from .geometry import (GeometricTransform, LkDecomposition, apply_transform, euclidean_norm_sq,
                       l_k, lorentz_norm, verify_eq_R)
from .hs_basis import (HSBasis, ggm_basis, pauli_basis, product_basis, structure_constants,
                       verify_hs_basis)
from .theta import (MetricSignature, ThetaSignature, as_superop, full_parity,
                    is_generalized_theta, partial_parity, theta_apply, theta_concurrence,
                    theta_fidelity)

__version__ = "0.1.0"

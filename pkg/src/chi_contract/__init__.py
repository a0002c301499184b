"""Chi-square contraction toolkit for information-constrained inference.

Channel informativeness matrices and their norms, chi-square and decoupled
fluctuations of perturbed families, adversarial perturbations for fixed
channel sequences, sample-complexity lower-bound calculators, and a
private-/public-coin SMP protocol simulator with exact small-instance
oracles.
"""

from ._backend import BACKEND
from .adversary import (AdversaryBasis, adversarial_basis,
                        adversarial_perturbation, maxmin_gap)
from .bounds import (BoundReport, binary_entropy, fano_learning_bound,
                     hamming_ball_log2, lb_general, lb_table)
from .channels import (ConstraintSpec, check_comm, check_ldp,
                       random_comm_channel, random_ldp_channel,
                       standard_channel)
from .contraction import HMatrix, h_bar, h_matrix, verify_norm_bounds
from .fluctuation import (FluctuationReport, brute_force_mixture_stats,
                          chaos_mgf, chi2_fluctuation, decoupled_fluctuation,
                          induced_chi2_fluctuation,
                          induced_decoupled_fluctuation, ingster_chi2)
from .perturbations import (LinearRademacherLaw, PerturbationVector,
                            PerturbedFamily, RademacherLaw,
                            check_almost_perturbation, general_family,
                            induced_perturbation, normalized_perturbation,
                            paninski_family)
from .prob import (CapExceededError, Channel, Distribution, ProductSpec,
                   apply_channel, divergence, enumerate_product, mix_channels)
from .simulate import (ProtocolConfig, TrialReport, exact_bayes_error,
                       pair_splitting_separation, simulate_smp)

__version__ = "0.1.0"

__all__ = [
    "AdversaryBasis", "BACKEND", "BoundReport", "CapExceededError", "Channel",
    "ConstraintSpec", "Distribution", "FluctuationReport", "HMatrix",
    "LinearRademacherLaw", "PerturbationVector", "PerturbedFamily",
    "ProductSpec", "ProtocolConfig", "RademacherLaw", "TrialReport",
    "adversarial_basis", "adversarial_perturbation", "apply_channel",
    "binary_entropy", "brute_force_mixture_stats", "chaos_mgf",
    "check_almost_perturbation", "check_comm", "check_ldp",
    "chi2_fluctuation", "decoupled_fluctuation", "divergence",
    "enumerate_product", "exact_bayes_error", "fano_learning_bound",
    "general_family", "h_bar", "h_matrix", "hamming_ball_log2",
    "induced_chi2_fluctuation", "induced_decoupled_fluctuation",
    "induced_perturbation", "ingster_chi2", "lb_general", "lb_table",
    "maxmin_gap", "mix_channels", "normalized_perturbation",
    "pair_splitting_separation", "paninski_family", "random_comm_channel",
    "random_ldp_channel", "simulate_smp", "standard_channel",
    "verify_norm_bounds",
]

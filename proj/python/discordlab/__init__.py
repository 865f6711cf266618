"""Two-qubit quantum discord estimation from coincidence counts."""

from ._core import (
    DiscordlabError,
    __version__,
    bell,
    discord,
    discord_analytic,
    discord_xmodel,
    entropy,
    estimate_p,
    fidelity,
    mc_uncertainty,
    ml_reconstruct,
    mutual_information,
    p_to_purity,
    phase_damped,
    purity,
    purity_to_p,
    run_cli,
    simulate_counts,
    state,
    werner,
    x_state,
)

__all__ = [
    "DiscordlabError",
    "__version__",
    "bell",
    "discord",
    "discord_analytic",
    "discord_xmodel",
    "entropy",
    "estimate_p",
    "fidelity",
    "mc_uncertainty",
    "ml_reconstruct",
    "mutual_information",
    "p_to_purity",
    "phase_damped",
    "purity",
    "purity_to_p",
    "run_cli",
    "simulate_counts",
    "state",
    "werner",
    "x_state",
]

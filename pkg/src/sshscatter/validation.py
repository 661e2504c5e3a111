"""Agreement suite: closed forms vs transfer pipeline vs finite lattice.

This module owns the cross-checks between the independent computation
routes.  It sits above both the scattering and lattice modules so the
oracle itself stays free of any transfer-matrix code.
"""

from __future__ import annotations

import numpy as np

from .bands import band_edges, dispersion_grid, momentum_from_energy
from .errors import ModelError
from .lattice import (
    boundary_matched_solve,
    packet_momentum_weights,
    wavepacket_transport,
)
from .params import (
    Band,
    CouplingConfig,
    EmitterParams,
    Variant,
    WaveguideParams,
)
from .scattering import scattering_matrix, transfer_matrix, transmittance

TOL_AGREEMENT = 1e-10
TOL_WAVEPACKET = 2e-2

# Carrier/control-field settings for the transport oracle: a detuned, a
# resonant, and a strongly driven case per coupling variant.  Single-site
# variants run on the delta = 0.5 chain.  The two-site variant runs on
# delta = -0.5, where the hybridized modes are broad and ring down within
# the chain; its resonant case transmits substantially and needs the extra
# length (on delta = +0.5 the modes are so narrow the stored excitation
# outlives any chain this size).
_PACKET_SETTINGS = {
    Variant.A: {"delta": 0.5, "cells_scale": 1.0,
                "cases": ((1.62, 0.0), (1.5, 0.0), (1.5, 0.4))},
    Variant.B: {"delta": 0.5, "cells_scale": 1.0,
                "cases": ((1.62, 0.0), (1.5, 0.0), (1.5, 0.4))},
    Variant.AB: {"delta": -0.5, "cells_scale": 1.5,
                 "cases": ((1.62, 0.0), (1.5, 0.0), (1.5, 0.4))},
}


def bandwidth_averaged_transmission(
    config: CouplingConfig,
    params: WaveguideParams,
    emitter: EmitterParams,
    k0: float,
    sigma_x: float,
    n_cells: int,
    band: Band = Band.UPPER,
) -> float:
    """Closed-form |t|^2 averaged over the packet's momentum distribution.

    Uses the same discrete momentum grid and Gaussian weights the packet is
    built from, so the comparison against transported probability has no
    free parameters.
    """
    k, weights = packet_momentum_weights(k0, sigma_x, n_cells)
    w2 = weights * weights
    energies = band.sign * dispersion_grid(np.abs(k), params)
    total = 0.0
    wsum = 0.0
    for energy, wm in zip(energies, w2):
        if wm < 1e-14:
            continue
        try:
            t = transmittance(config, float(energy), params, emitter, band)
        except ModelError:
            continue
        total += wm * abs(t) ** 2
        wsum += wm
    return total / wsum


def _draw_case(rng, variant):
    """One random in-band parameter draw, rejecting near-degenerate points
    where double precision cannot support the 1e-10 agreement target."""
    while True:
        delta = float(rng.uniform(0.15, 0.7)) * (1.0 if rng.random() < 0.5 else -1.0)
        wg = WaveguideParams(delta=delta)
        gap, outer = band_edges(wg)
        omega = gap + float(rng.uniform(0.08, 0.92)) * (outer - gap)
        omega_e = omega - float(rng.uniform(-0.3, 0.3))
        delta_c = float(rng.uniform(-0.2, 0.2))
        omega_rabi = float(rng.uniform(0.0, 0.5))
        g = float(rng.uniform(0.05, 0.4))
        if variant is Variant.A:
            alpha = 1.0
        elif variant is Variant.B:
            alpha = 0.0
        else:
            alpha = float(rng.uniform(0.15, 0.85))
        x1 = int(rng.integers(4, 12))
        emitter = EmitterParams(
            omega_e=omega_e, delta_c=delta_c, omega_rabi=omega_rabi, g=g, x1=x1
        )
        config = CouplingConfig(variant, alpha)
        dk = omega - omega_e
        if omega_rabi == 0.0 and abs(dk) < 1e-3:
            continue
        den = 4.0 * dk * (dk + delta_c) - omega_rabi * omega_rabi
        if omega_rabi > 0.0 and abs(den) < 1e-4:
            continue
        if variant is Variant.AB:
            resp = (dk + delta_c) / den if omega_rabi > 0.0 else 1.0 / (4.0 * dk)
            cross = 4.0 * g * g * alpha * (1.0 - alpha) * resp
            if abs(wg.t1 - cross) < 1e-3 * wg.t1:
                continue
        return wg, emitter, config, omega


def agreement_report(
    draws_per_config: int = 20,
    seed: int = 20240811,
    n_cells: int = 32,
    include_wavepacket: bool = True,
    wavepacket_cells: int = 400,
    sigma_x: float = 20.0,
) -> dict:
    """Run the full agreement chain and return a JSON-ready report.

    For every coupling variant, ``draws_per_config`` random in-band points
    compare the closed-form transmission against the transfer-matrix
    pipeline and against the boundary-matched lattice solve; the transport
    oracle then checks each variant at three carrier settings.
    """
    rng = np.random.default_rng(seed)
    max_cm = 0.0
    max_cl = 0.0
    max_res = 0.0
    n_cases = 0
    for variant in (Variant.A, Variant.B, Variant.AB):
        for _ in range(draws_per_config):
            wg, emitter, config, omega = _draw_case(rng, variant)
            t_closed = transmittance(config, omega, wg, emitter)
            k = momentum_from_energy(omega, wg)
            t_pipe = scattering_matrix(transfer_matrix(config, k, wg, emitter)).t_left
            sol = boundary_matched_solve(omega, n_cells, wg, emitter, config)
            max_cm = max(max_cm, abs(t_closed - t_pipe))
            max_cl = max(max_cl, abs(t_closed - sol.t_num))
            max_res = max(max_res, sol.residual)
            n_cases += 1

    packet_cases = []
    max_wp = 0.0
    if include_wavepacket:
        for variant, setting in _PACKET_SETTINGS.items():
            config = CouplingConfig(variant)
            wg = WaveguideParams(delta=setting["delta"])
            cells = int(round(wavepacket_cells * setting["cells_scale"]))
            for omega_carrier, omega_rabi in setting["cases"]:
                emitter = EmitterParams(
                    omega_e=1.5, omega_rabi=omega_rabi, g=0.2, x1=cells // 2
                )
                k0 = momentum_from_energy(omega_carrier, wg)
                run = wavepacket_transport(k0, sigma_x, cells, wg, emitter, config)
                t_avg = bandwidth_averaged_transmission(
                    config, wg, emitter, k0, sigma_x, cells
                )
                diff = abs(run.transmitted - t_avg)
                max_wp = max(max_wp, diff)
                packet_cases.append(
                    {
                        "config": variant.value,
                        "delta": setting["delta"],
                        "k0": k0,
                        "omega_rabi": omega_rabi,
                        "n_cells": cells,
                        "T_analytic_avg": t_avg,
                        "T_wp": run.transmitted,
                        "diff": diff,
                    }
                )

    passed = (
        max_cm < TOL_AGREEMENT
        and max_cl < TOL_AGREEMENT
        and (not include_wavepacket or max_wp < TOL_WAVEPACKET)
    )
    return {
        "n_cases": n_cases,
        "seed": seed,
        "n_cells": n_cells,
        "tolerance_agreement": TOL_AGREEMENT,
        "tolerance_wavepacket": TOL_WAVEPACKET,
        "max_abs_error_closed_vs_matrix": max_cm,
        "max_abs_error_closed_vs_lattice": max_cl,
        "max_lattice_residual": max_res,
        "max_wavepacket_diff": max_wp,
        "wavepacket_cases": packet_cases,
        "passed": passed,
    }

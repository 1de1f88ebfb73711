"""Figure rendering for the CLI report path.

Figures are a convenience companion to the CSV tables, never a replacement:
every quantity plotted here is read back from the same row objects that the
CSV writers serialize.  Rendering is headless (Agg) so the CLI works in
batch environments.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_rate_spectrum_figure(rows, path) -> None:
    """Rates and transmission proxy versus wavelength, log scale."""
    plt = _pyplot()
    lam = np.array([r.lambda_nm for r in rows])
    gamma_s = np.array([r.gamma_s for r in rows])
    gamma_c = np.array([r.gamma_c for r in rows])
    omega_c = np.array([r.omega_c for r in rows])
    proxy = np.array([r.transmission_proxy for r in rows])

    fig, (ax_rates, ax_proxy) = plt.subplots(
        2, 1, sharex=True, figsize=(6.4, 6.4), constrained_layout=True
    )
    ax_rates.semilogy(lam, gamma_s, label=r"$\gamma_s/\gamma_0$")
    ax_rates.semilogy(lam, np.abs(gamma_c), label=r"$|\gamma_c|/\gamma_0$")
    ax_rates.semilogy(lam, np.abs(omega_c), label=r"$|\Omega_c|/\gamma_0$")
    ax_rates.set_ylabel(r"rate / $\gamma_0$")
    ax_rates.legend(frameon=False)
    ax_proxy.semilogy(lam, proxy)
    ax_proxy.set_xlabel("wavelength (nm)")
    ax_proxy.set_ylabel(r"$\gamma_c^2 + \Omega_c^2$")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_concurrence_map_figure(cmap, path) -> None:
    """Concurrence over the (wavelength, time) grid as a color map."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8), constrained_layout=True)
    mesh = ax.pcolormesh(
        cmap.t_gamma0, cmap.lambdas_nm, cmap.concurrence, shading="auto", vmin=0.0
    )
    ax.set_xlabel(r"$t \, \gamma_0$")
    ax.set_ylabel("wavelength (nm)")
    fig.colorbar(mesh, ax=ax, label="concurrence")
    fig.savefig(path, dpi=150)
    plt.close(fig)

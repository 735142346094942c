"""Independent numerical oracles shared by the test suite.

Everything here deliberately avoids the library's own update/sampling code:
posteriors are obtained by brute-force quadrature of likelihood x prior, and
moments by direct integration/summation, so the tests check the analytic
implementations against an unrelated computational path.
"""

import numpy as np


def grid_moments(grid: np.ndarray, log_density: np.ndarray):
    """Normalize an unnormalized log density on a grid; return (mean, var)."""
    log_density = log_density - log_density.max()
    w = np.exp(log_density)
    z = np.trapezoid(w, grid)
    mean = np.trapezoid(grid * w, grid) / z
    var = np.trapezoid((grid - mean) ** 2 * w, grid) / z
    return float(mean), float(var)


def beta_posterior_moments(a0, b0, successes, failures, n_grid=200_001):
    """Posterior of a Bernoulli probability under a Beta prior, by quadrature."""
    eps = 1e-12
    p = np.linspace(eps, 1.0 - eps, n_grid)
    logd = (
        (a0 - 1.0) * np.log(p)
        + (b0 - 1.0) * np.log1p(-p)
        + successes * np.log(p)
        + failures * np.log1p(-p)
    )
    return grid_moments(p, logd)


def gamma_exponential_posterior_moments(a0, scale0, excess_sum, n, n_grid=200_001):
    """Posterior of the excess *rate* under the rate-form Gamma prior.

    Prior: rate ~ Gamma(shape=a0, rate=1/scale0); likelihood of n exponential
    excesses with total ``excess_sum``: rate^n * exp(-rate * excess_sum).
    """
    a_star = a0 + n
    rate_star = 1.0 / scale0 + excess_sum
    mean_guess = a_star / rate_star
    sd_guess = np.sqrt(a_star) / rate_star
    hi = mean_guess + 15.0 * sd_guess
    r = np.linspace(1e-12, hi, n_grid)
    logd = (a0 - 1.0) * np.log(r) - r / scale0 + n * np.log(r) - r * excess_sum
    return grid_moments(r, logd)


def normal_mean_posterior_moments(mu0, sigma2_0, sigma2_fixed, obs, n_grid=100_001):
    """Posterior of a Gaussian mean with the variance pinned, by quadrature."""
    obs = np.asarray(obs, dtype=float)
    n = obs.size
    post_var_guess = 1.0 / (1.0 / sigma2_0 + n / sigma2_fixed)
    center = post_var_guess * (mu0 / sigma2_0 + obs.sum() / sigma2_fixed)
    half = 12.0 * np.sqrt(post_var_guess)
    mu = np.linspace(center - half, center + half, n_grid)
    logd = -0.5 * (mu - mu0) ** 2 / sigma2_0
    logd = logd - 0.5 * ((obs[:, None] - mu[None, :]) ** 2).sum(axis=0) / sigma2_fixed
    return grid_moments(mu, logd)


def inverse_gamma_posterior_moments(a0, b0, mu_fixed, obs, n_grid=400_001):
    """Posterior of a Gaussian variance under an inverse-gamma prior.

    Integrates over the precision tau = 1/sigma^2 (whose posterior is a
    Gamma), then converts to moments of sigma^2 = 1/tau.
    """
    obs = np.asarray(obs, dtype=float)
    n = obs.size
    sse = float(np.sum((obs - mu_fixed) ** 2))
    a_star = a0 + n / 2.0
    rate_star = b0 + sse / 2.0
    hi = (a_star + 20.0 * np.sqrt(a_star)) / rate_star
    tau = np.linspace(1e-12, hi, n_grid)
    logd = (a_star - 1.0) * np.log(tau) - rate_star * tau
    logd = logd - logd.max()
    w = np.exp(logd)
    z = np.trapezoid(w, tau)
    mean_v = np.trapezoid((1.0 / tau) * w, tau) / z
    m2_v = np.trapezoid((1.0 / tau) ** 2 * w, tau) / z
    return float(mean_v), float(m2_v - mean_v**2)


def overlap_index_pixel_oracle(boxes, cell=1):
    """Overlap index by brute-force pixel-grid counting.

    ``boxes`` are (page, x, y, w, h) in integer pixels; the index is the
    summed pairwise intersection area divided by the summed box area.
    """
    total_area = sum(w * h for _, _, _, w, h in boxes)
    if total_area == 0:
        return 0.0
    inter = 0
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            pi, xi, yi, wi, hi_ = boxes[i]
            pj, xj, yj, wj, hj = boxes[j]
            if pi != pj:
                continue
            for x in range(max(xi, xj), min(xi + wi, xj + wj), cell):
                for y in range(max(yi, yj), min(yi + hi_, yj + hj), cell):
                    inter += 1
    return inter / total_area


def alignment_index_oracle(boxes, page_width):
    """Alignment index by exhaustive pairwise edge comparison.

    For each box the distance to the closest matching guide (left-left,
    center-center or right-right) among all other boxes, normalized by the
    page width; the index is the mean over boxes.  Zero or one box gives 0.
    """
    if len(boxes) <= 1:
        return 0.0
    guides = []
    for _, x, y, w, h in boxes:
        guides.append((x, x + w / 2.0, x + w))
    dists = []
    for i, gi in enumerate(guides):
        best = np.inf
        for j, gj in enumerate(guides):
            if i == j:
                continue
            for k in range(3):
                best = min(best, abs(gi[k] - gj[k]))
        dists.append(best / page_width)
    return float(np.mean(dists))

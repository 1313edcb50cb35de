#!/usr/bin/env python3
# Copyright 2026 The teamstruct Authors.
# SPDX-License-Identifier: Apache-2.0
"""Reference values for the frozen fixtures in tests/oracle_fixtures.hpp.

Optimizes affine rules u_i = c_i + L_i y_i directly over the measurements,
using exact second moments of (1, x, w_1, ..., w_N). This is independent of
the estimate-based parameterization used by the library. The quadratic cost
is recovered from function evaluations and its stationary point solved with
least squares, so singular measurement covariances are handled.

Usage: python3 tools/oracle.py > tests/oracle_fixtures.hpp
"""

import numpy as np


def moments(mean, cov, channels):
    """Second-moment matrix of xi = (1, x, w_1, ..., w_N)."""
    n = len(mean)
    p = [h.shape[0] for h, _ in channels]
    size = 1 + n + sum(p)
    s = np.zeros((size, size))
    s[0, 0] = 1.0
    s[0, 1:1 + n] = mean
    s[1:1 + n, 0] = mean
    s[1:1 + n, 1:1 + n] = cov + np.outer(mean, mean)
    off = 1 + n
    for (_, r), pi in zip(channels, p):
        s[off:off + pi, off:off + pi] = r
        off += pi
    return s


def rule_map(theta, n, channels, dims):
    """Matrix Phi with u = Phi xi for parameters theta = (c_i, vec L_i)."""
    p = [h.shape[0] for h, _ in channels]
    size = 1 + n + sum(p)
    phi = np.zeros((sum(dims), size))
    k = 0
    row = 0
    woff = 1 + n
    for (h, _), m, pi in zip(channels, dims, p):
        c = theta[k:k + m]
        k += m
        l = theta[k:k + m * pi].reshape(m, pi)
        k += m * pi
        phi[row:row + m, 0] = c
        phi[row:row + m, 1:1 + n] = l @ h
        phi[row:row + m, woff:woff + pi] = l
        row += m
        woff += pi
    return phi


def num_params(channels, dims):
    return sum(m + m * h.shape[0] for (h, _), m in zip(channels, dims))


def quadratic_form(f, dim):
    """Hessian and gradient of a quadratic f with f(0) = 0."""
    e = np.eye(dim)
    f1 = np.array([f(e[i]) for i in range(dim)])
    hess = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            hess[i, j] = hess[j, i] = f(e[i] + e[j]) - f1[i] - f1[j]
    grad = f1 - 0.5 * np.diag(hess)
    return hess, grad


def unpack(theta, channels, dims):
    rules = []
    k = 0
    for (h, _), m in zip(channels, dims):
        c = theta[k:k + m]
        k += m
        l = theta[k:k + m * h.shape[0]].reshape(m, h.shape[0])
        k += m * h.shape[0]
        rules.append((c, l))
    return rules


def solve_team(mean, cov, channels, q, p, dims):
    n = len(mean)
    s = moments(mean, cov, channels)
    x_sel = np.zeros((n, s.shape[0]))
    x_sel[:, 1:1 + n] = np.eye(n)

    def cost(theta):
        phi = rule_map(theta, n, channels, dims)
        return (np.trace(q @ x_sel @ s @ phi.T) +
                0.5 * np.trace(p @ phi @ s @ phi.T))

    dim = num_params(channels, dims)
    hess, grad = quadratic_form(cost, dim)
    theta = np.linalg.lstsq(hess, -grad, rcond=None)[0]
    return cost(theta), unpack(theta, channels, dims)


def solve_game(mean, cov, blue, red, obj):
    n = len(mean)
    channels = blue + red
    s = moments(mean, cov, channels)
    x_sel = np.zeros((n, s.shape[0]))
    x_sel[:, 1:1 + n] = np.eye(n)
    nb = num_params(blue, obj["blue_dims"])
    nr = num_params(red, obj["red_dims"])

    def maps(theta):
        # Blue rules use noise slots of the blue channels, red those after.
        full_dims = obj["blue_dims"] + obj["red_dims"]
        phi = rule_map(theta, n, channels, full_dims)
        mb = sum(obj["blue_dims"])
        return phi[:mb], phi[mb:]

    def cost(theta, which):
        u, v = maps(theta)
        if which == 1:
            return (np.trace(obj["Q1"] @ x_sel @ s @ u.T) +
                    0.5 * np.trace(obj["P1"] @ u @ s @ u.T) +
                    np.trace(obj["R1"] @ u @ s @ v.T))
        return (np.trace(obj["Q2"] @ x_sel @ s @ v.T) +
                0.5 * np.trace(obj["P2"] @ v @ s @ v.T) +
                np.trace(obj["R2"] @ u @ s @ v.T))

    dim = nb + nr
    h1, g1 = quadratic_form(lambda t: cost(t, 1), dim)
    h2, g2 = quadratic_form(lambda t: cost(t, 2), dim)
    # Stationarity of each team's cost in its own parameters.
    system = np.vstack([h1[:nb], h2[nb:]])
    rhs = -np.concatenate([g1[:nb], g2[nb:]])
    theta = np.linalg.lstsq(system, rhs, rcond=None)[0]
    return cost(theta, 1), cost(theta, 2)


def gram(rng, rows, cols):
    a = rng.standard_normal((rows, cols))
    return a.T @ a


def cxx_matrix(name, a):
    a = np.atleast_2d(a)
    rows = ", ".join(
        "{" + ", ".join(f"{v:.17g}" for v in row) + "}" for row in a)
    return f"inline const Rows {name} = {{{rows}}};"


def cxx_vector(name, v):
    return f"inline const std::vector<double> {name} = {{" + ", ".join(
        f"{x:.17g}" for x in v) + "};"


def main():
    rng = np.random.default_rng(20260415)
    out = []

    # Team fixture: n = 3, two agents with 1 and 2 decisions, nonzero mean,
    # one noiseless measurement row.
    n = 3
    mean = rng.standard_normal(n)
    cov = gram(rng, 4, n) + 0.1 * np.eye(n)
    dims = [1, 2]
    h0 = rng.standard_normal((1, n))
    h1 = rng.standard_normal((2, n))
    r0 = np.zeros((1, 1))
    r1 = gram(rng, 3, 2)
    q = rng.standard_normal((3, n))
    p = gram(rng, 5, 3) + 0.5 * np.eye(3)
    channels = [(h0, r0), (h1, r1)]
    value, rules = solve_team(mean, cov, channels, q, p, dims)
    out.append("// Team fixture: n = 3, agents with 1 and 2 decisions.")
    out += [cxx_vector("kTeamMean", mean), cxx_matrix("kTeamCov", cov),
            cxx_matrix("kTeamH0", h0), cxx_matrix("kTeamR0", r0),
            cxx_matrix("kTeamH1", h1), cxx_matrix("kTeamR1", r1),
            cxx_matrix("kTeamQ", q), cxx_matrix("kTeamP", p)]
    out.append(f"inline constexpr double kTeamValue = {value:.17g};")
    for i, (c, l) in enumerate(rules):
        out.append(cxx_vector(f"kTeamOffset{i}", c))
        out.append(cxx_matrix(f"kTeamMeasurementGain{i}", l))

    # Full information single agent: -1/2 tr(Q^T P^-1 Q X) at zero mean.
    fq = rng.standard_normal((2, n))
    fp = gram(rng, 4, 2) + 0.5 * np.eye(2)
    fvalue, _ = solve_team(np.zeros(n), cov, [(np.eye(n), np.zeros((n, n)))],
                           fq, fp, [2])
    closed = -0.5 * np.trace(fq.T @ np.linalg.solve(fp, fq) @ cov)
    assert abs(fvalue - closed) < 1e-9 * max(1.0, abs(closed))
    out.append("// Full-information single agent (closed form check).")
    out += [cxx_matrix("kFullInfoQ", fq), cxx_matrix("kFullInfoP", fp)]
    out.append(f"inline constexpr double kFullInfoValue = {closed:.17g};")

    # Game fixture: n = 2, one blue agent (2 decisions), one red agent
    # (1 decision), nonzero cross kernels.
    n = 2
    mean = rng.standard_normal(n)
    cov = gram(rng, 3, n) + 0.1 * np.eye(n)
    bh = rng.standard_normal((1, n))
    br = np.array([[0.3]])
    gh = rng.standard_normal((1, n))
    gr = np.array([[0.2]])
    obj = {
        "Q1": rng.standard_normal((2, n)),
        "P1": gram(rng, 3, 2) + np.eye(2),
        "R1": 0.3 * rng.standard_normal((1, 2)),
        "Q2": rng.standard_normal((1, n)),
        "P2": gram(rng, 2, 1) + np.eye(1),
        "R2": 0.3 * rng.standard_normal((1, 2)),
        "blue_dims": [2],
        "red_dims": [1],
    }
    j1, j2 = solve_game(mean, cov, [(bh, br)], [(gh, gr)], obj)
    out.append("// Game fixture: n = 2, one agent per team.")
    out += [cxx_vector("kGameMean", mean), cxx_matrix("kGameCov", cov),
            cxx_matrix("kGameBlueH", bh), cxx_matrix("kGameBlueR", br),
            cxx_matrix("kGameRedG", gh), cxx_matrix("kGameRedT", gr)]
    for key in ["Q1", "P1", "R1", "Q2", "P2", "R2"]:
        out.append(cxx_matrix(f"kGame{key}", obj[key]))
    out.append(f"inline constexpr double kGameBlueValue = {j1:.17g};")
    out.append(f"inline constexpr double kGameRedValue = {j2:.17g};")

    # Supermodularity fixture: three candidates on a random team instance,
    # all eight subset values.
    n = 3
    cov = gram(rng, 4, n) + 0.1 * np.eye(n)
    sh = [rng.standard_normal((1, n)) for _ in range(2)]
    sr = [np.array([[0.5]]), np.array([[0.4]])]
    sq = rng.standard_normal((2, n))
    sp = gram(rng, 4, 2) + 0.5 * np.eye(2)
    cands = [(0, rng.standard_normal(n), 0.1), (1, rng.standard_normal(n), 0.0),
             (0, rng.standard_normal(n), 0.3)]
    values = []
    for mask in range(8):
        hs = [sh[0], sh[1]]
        rs = [sr[0], sr[1]]
        for c, (agent, h, r) in enumerate(cands):
            if mask >> c & 1:
                hs[agent] = np.vstack([hs[agent], h])
                rr = np.zeros((rs[agent].shape[0] + 1,) * 2)
                rr[:-1, :-1] = rs[agent]
                rr[-1, -1] = r
                rs[agent] = rr
        v, _ = solve_team(np.zeros(n), cov, list(zip(hs, rs)), sq, sp, [1, 1])
        values.append(v)
    out.append("// Three-candidate design fixture; values indexed by bitmask.")
    out += [cxx_matrix("kDesignCov", cov), cxx_matrix("kDesignH0", sh[0]),
            cxx_matrix("kDesignH1", sh[1]), cxx_matrix("kDesignQ", sq),
            cxx_matrix("kDesignP", sp)]
    out.append("inline const std::vector<double> kDesignR = {0.5, 0.4};")
    for c, (agent, h, r) in enumerate(cands):
        out.append(f"inline constexpr int kDesignCandAgent{c} = {agent};")
        out.append(cxx_vector(f"kDesignCandH{c}", h))
        out.append(f"inline constexpr double kDesignCandR{c} = {r:.17g};")
    out.append(cxx_vector("kDesignSubsetValues", values))

    print("// Copyright 2026 The teamstruct Authors.")
    print("// SPDX-License-Identifier: Apache-2.0")
    print("//")
    print("// Generated by tools/oracle.py. Do not edit.")
    print()
    print("#ifndef TEAMSTRUCT_TESTS_ORACLE_FIXTURES_HPP_")
    print("#define TEAMSTRUCT_TESTS_ORACLE_FIXTURES_HPP_")
    print()
    print("#include <vector>")
    print()
    print("namespace teamstruct::oracle {")
    print()
    print("using Rows = std::vector<std::vector<double>>;")
    print()
    print("\n".join(out))
    print()
    print("}  // namespace teamstruct::oracle")
    print()
    print("#endif  // TEAMSTRUCT_TESTS_ORACLE_FIXTURES_HPP_")


if __name__ == "__main__":
    main()

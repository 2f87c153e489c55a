#pragma once

// Lazy Levy walk on the discrete 3D torus graph and exact Markov-chain
// oracles (absorption hitting steps, total-variation mixing) for small
// instances.
//
// Each step: with probability lazy_prob stay put at zero time cost;
// otherwise draw l in [1, l_max] with P(l) proportional to l^-mu, jump to a
// uniform node at Manhattan distance l, and charge time l.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace levy3d {

using Offset = std::array<int, 3>;

/// Number of points of Z^3 at Manhattan distance `ell` from the origin.
inline std::int64_t shell_size(std::int64_t ell) {
    detail::require(ell >= 0, "shell_size: ell must be non-negative");
    return ell == 0 ? 1 : 4 * ell * ell + 2;
}

/// Bijection between [0, shell_size(l)) and the Manhattan sphere of radius l
/// in Z^3. Points are ordered by x, then around the (y, z) diamond of radius
/// l - |x|.
class LatticeShellIndex {
public:
    explicit LatticeShellIndex(int ell) : ell_(ell) {
        detail::require(ell >= 1, "LatticeShellIndex: ell must be >= 1");
        prefix_.reserve(2 * static_cast<std::size_t>(ell) + 2);
        std::int64_t acc = 0;
        for (int x = -ell; x <= ell; ++x) {
            prefix_.push_back(acc);
            acc += ring_size(ell - std::abs(x));
        }
        prefix_.push_back(acc);
    }

    int ell() const { return ell_; }
    std::int64_t size() const { return prefix_.back(); }

    Offset at(std::int64_t index) const {
        detail::require(index >= 0 && index < size(), "LatticeShellIndex: index out of range");
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), index) - 1;
        const int x = static_cast<int>(it - prefix_.begin()) - ell_;
        const int r = ell_ - std::abs(x);
        const auto k = static_cast<int>(index - *it);
        if (r == 0) {
            return {x, 0, 0};
        }
        const int t = k % r;
        switch (k / r) {
            case 0: return {x, r - t, t};
            case 1: return {x, -t, r - t};
            case 2: return {x, -(r - t), -t};
            default: return {x, t, -(r - t)};
        }
    }

    std::int64_t index_of(const Offset& p) const {
        const auto [x, y, z] = p;
        detail::require(std::abs(x) + std::abs(y) + std::abs(z) == ell_, "LatticeShellIndex: point not on shell");
        const int r = ell_ - std::abs(x);
        const std::int64_t base = prefix_[static_cast<std::size_t>(x + ell_)];
        if (r == 0) return base;
        int segment = 0;
        int t = 0;
        if (y > 0 && z >= 0) {
            segment = 0;
            t = z;
        } else if (y <= 0 && z > 0) {
            segment = 1;
            t = -y;
        } else if (y < 0 && z <= 0) {
            segment = 2;
            t = -z;
        } else {
            segment = 3;
            t = y;
        }
        return base + static_cast<std::int64_t>(segment) * r + t;
    }

private:
    static std::int64_t ring_size(int r) { return r == 0 ? 1 : 4 * static_cast<std::int64_t>(r); }

    int ell_;
    std::vector<std::int64_t> prefix_;
};

struct LatticeWalkParams {
    int side = 16;       // torus has side^3 nodes
    double mu = 2.5;
    int ell_max = 0;     // <= 0 selects side / 2
    double lazy_prob = 0.5;

    int effective_ell_max() const { return ell_max > 0 ? ell_max : side / 2; }
    double nodes() const { return static_cast<double>(side) * side * side; }

    void validate() const {
        detail::require(side >= 2, "lattice side must be >= 2");
        detail::require(std::isfinite(mu) && mu > 1.0 && mu <= 3.0, "mu must lie in (1, 3]");
        detail::require(effective_ell_max() >= 1, "ell_max must be >= 1");
        detail::require(lazy_prob >= 0.0 && lazy_prob < 1.0, "lazy_prob must lie in [0, 1)");
    }
};

/// Probabilities P(l) proportional to l^-mu on [1, l_max].
inline std::vector<double> discrete_length_weights(double mu, int ell_max) {
    std::vector<double> w(static_cast<std::size_t>(ell_max));
    double total = 0.0;
    for (int l = 1; l <= ell_max; ++l) {
        w[static_cast<std::size_t>(l - 1)] = std::pow(static_cast<double>(l), -mu);
        total += w[static_cast<std::size_t>(l - 1)];
    }
    for (double& x : w) x /= total;
    return w;
}

struct Jump {
    Offset offset{0, 0, 0};
    int length = 0;  // time cost; 0 for a lazy step
};

class LatticeJumpSampler {
public:
    explicit LatticeJumpSampler(const LatticeWalkParams& params) : params_(params) {
        params.validate();
        const auto w = discrete_length_weights(params.mu, params.effective_ell_max());
        lengths_ = std::discrete_distribution<int>(w.begin(), w.end());
        shells_.reserve(w.size());
        for (int l = 1; l <= params.effective_ell_max(); ++l) shells_.emplace_back(l);
    }

    const LatticeWalkParams& params() const { return params_; }

    template <class Engine>
    Jump operator()(Engine& rng) {
        if (uniform01(rng) < params_.lazy_prob) {
            return {};
        }
        const int l = lengths_(rng) + 1;
        const auto& shell = shells_[static_cast<std::size_t>(l - 1)];
        std::uniform_int_distribution<std::int64_t> pick(0, shell.size() - 1);
        return {shell.at(pick(rng)), l};
    }

private:
    LatticeWalkParams params_;
    std::discrete_distribution<int> lengths_;
    std::vector<LatticeShellIndex> shells_;
};

template <class Engine>
Jump sample_jump(LatticeJumpSampler& sampler, Engine& rng) {
    return sampler(rng);
}

struct HitOutcome {
    std::uint64_t time = 0;
    std::uint64_t steps = 0;  // includes lazy steps
    bool truncated = false;
};

struct HitSummary {
    std::size_t trials = 0;
    double truncated_fraction = 0.0;
    double mean_time = 0.0;
    double sem_time = 0.0;
    double mean_steps = 0.0;
    double sem_steps = 0.0;
};

namespace detail {

inline int wrap_index(int v, int side) {
    v %= side;
    return v < 0 ? v + side : v;
}

/// Target: nodes (x, 0, 0) with 0 <= x < length.
inline bool on_line(const std::array<int, 3>& p, int length) { return p[1] == 0 && p[2] == 0 && p[0] < length; }

template <class Engine>
HitOutcome hit_line_trial(LatticeJumpSampler& sampler, int length, Engine& rng, std::uint64_t step_cap) {
    const int side = sampler.params().side;
    std::uniform_int_distribution<int> coord(0, side - 1);
    std::array<int, 3> pos{coord(rng), coord(rng), coord(rng)};
    HitOutcome out;
    if (on_line(pos, length)) return out;
    while (out.steps < step_cap) {
        const Jump j = sampler(rng);
        ++out.steps;
        if (j.length == 0) continue;
        out.time += static_cast<std::uint64_t>(j.length);
        for (std::size_t k = 0; k < 3; ++k) pos[k] = wrap_index(pos[k] + j.offset[k], side);
        if (on_line(pos, length)) return out;
    }
    out.truncated = true;
    return out;
}

}  // namespace detail

/// Monte Carlo detection of an axis-parallel path of `length` nodes from a
/// uniform start. Both time (sum of jump lengths) and step counts (including
/// lazy steps) are reported.
inline HitSummary hit_line(const LatticeWalkParams& params, int length, std::size_t trials,
                           std::uint64_t master_seed, std::uint64_t step_cap = 1'000'000'000ULL) {
    params.validate();
    detail::require(length >= 1 && length <= params.side, "hit_line: need 1 <= L <= side");
    detail::require(trials >= 1, "hit_line: need at least one trial");
    std::vector<HitOutcome> outcomes(trials);
    const LatticeJumpSampler prototype(params);
    parallel_for(trials, [&](std::size_t i) {
        LatticeJumpSampler sampler = prototype;
        Rng rng = make_stream(master_seed, i);
        outcomes[i] = detail::hit_line_trial(sampler, length, rng, step_cap);
    });
    RunningStats time;
    RunningStats steps;
    std::size_t truncated = 0;
    for (const auto& o : outcomes) {
        if (o.truncated) {
            ++truncated;
            continue;
        }
        time.add(static_cast<double>(o.time));
        steps.add(static_cast<double>(o.steps));
    }
    if (time.count() == 0) {
        throw DiagnosticError("hit_line: every trial hit the step cap");
    }
    return {trials, static_cast<double>(truncated) / static_cast<double>(trials), time.mean(), time.sem(),
            steps.mean(), steps.sem()};
}

// ---------------------------------------------------------------------------
// Explicit Markov chains

/// Sparse row-stochastic transition kernel.
struct MarkovChain {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

    std::size_t states() const { return rows.size(); }
};

inline constexpr std::size_t kMaxExactStates = 8000;  // 20^3

/// Translation-invariant chain on the torus (Z/m)^dim from a distribution of
/// offsets. Offsets that wrap onto the same node are merged.
inline MarkovChain translation_chain(int dim, int m, const std::vector<std::pair<Offset, double>>& kernel) {
    detail::require(dim >= 1 && dim <= 3, "translation_chain: dim must be 1, 2 or 3");
    detail::require(m >= 2, "translation_chain: need at least 2 nodes per axis");
    std::size_t states = 1;
    for (int i = 0; i < dim; ++i) states *= static_cast<std::size_t>(m);
    detail::require(states <= kMaxExactStates, "translation_chain: too many states for an explicit chain");
    MarkovChain chain;
    chain.rows.resize(states);
    for (std::size_t s = 0; s < states; ++s) {
        std::array<int, 3> c{0, 0, 0};
        std::size_t rest = s;
        for (int k = 0; k < dim; ++k) {
            c[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(m));
            rest /= static_cast<std::size_t>(m);
        }
        std::map<std::uint32_t, double> row;
        for (const auto& [off, p] : kernel) {
            std::size_t idx = 0;
            std::size_t stride = 1;
            for (int k = 0; k < dim; ++k) {
                const int v = detail::wrap_index(c[static_cast<std::size_t>(k)] + off[static_cast<std::size_t>(k)], m);
                idx += static_cast<std::size_t>(v) * stride;
                stride *= static_cast<std::size_t>(m);
            }
            row[static_cast<std::uint32_t>(idx)] += p;
        }
        chain.rows[s].assign(row.begin(), row.end());
    }
    return chain;
}

/// Lazy simple random walk on the cycle of m nodes.
inline MarkovChain lazy_simple_cycle(int m) {
    return translation_chain(1, m, {{{0, 0, 0}, 0.5}, {{1, 0, 0}, 0.25}, {{-1, 0, 0}, 0.25}});
}

/// Lazy simple random walk on the m x m torus.
inline MarkovChain lazy_simple_torus2d(int m) {
    return translation_chain(2, m,
                             {{{0, 0, 0}, 0.5},
                              {{1, 0, 0}, 0.125},
                              {{-1, 0, 0}, 0.125},
                              {{0, 1, 0}, 0.125},
                              {{0, -1, 0}, 0.125}});
}

namespace detail {

/// Manhattan sphere of radius l in Z^dim.
inline std::vector<Offset> manhattan_shell(int dim, int l) {
    std::vector<Offset> out;
    if (dim == 1) {
        out.push_back({l, 0, 0});
        out.push_back({-l, 0, 0});
    } else if (dim == 2) {
        for (int x = -l; x <= l; ++x) {
            const int r = l - std::abs(x);
            out.push_back({x, r, 0});
            if (r != 0) out.push_back({x, -r, 0});
        }
    } else {
        const LatticeShellIndex shell(l);
        for (std::int64_t i = 0; i < shell.size(); ++i) out.push_back(shell.at(i));
    }
    return out;
}

inline std::vector<std::pair<Offset, double>> levy_kernel(int dim, double mu, int ell_max, double lazy_prob) {
    std::vector<std::pair<Offset, double>> kernel;
    if (lazy_prob > 0.0) kernel.push_back({{0, 0, 0}, lazy_prob});
    const auto w = discrete_length_weights(mu, ell_max);
    for (int l = 1; l <= ell_max; ++l) {
        const auto shell = manhattan_shell(dim, l);
        const double p = (1.0 - lazy_prob) * w[static_cast<std::size_t>(l - 1)] / static_cast<double>(shell.size());
        for (const auto& o : shell) kernel.push_back({o, p});
    }
    return kernel;
}

}  // namespace detail

/// Discrete Levy walk in `dim` dimensions on the torus (Z/m)^dim.
inline MarkovChain levy_chain(int dim, int m, double mu, int ell_max, double lazy_prob = 0.5) {
    detail::require(std::isfinite(mu) && mu > 1.0 && mu <= 3.0, "mu must lie in (1, 3]");
    detail::require(ell_max >= 1, "ell_max must be >= 1");
    return translation_chain(dim, m, detail::levy_kernel(dim, mu, ell_max, lazy_prob));
}

/// The full 3D lattice walk as an explicit chain (node index x + side*y + side^2*z).
inline MarkovChain lattice_chain(const LatticeWalkParams& params) {
    params.validate();
    return levy_chain(3, params.side, params.mu, params.effective_ell_max(), params.lazy_prob);
}

/// The x-coordinate of the 3D lattice walk, as a chain on the cycle.
inline MarkovChain projected_lattice_cycle(const LatticeWalkParams& params) {
    params.validate();
    auto kernel3 = detail::levy_kernel(3, params.mu, params.effective_ell_max(), params.lazy_prob);
    std::map<int, double> marginal;
    for (const auto& [off, p] : kernel3) marginal[off[0]] += p;
    std::vector<std::pair<Offset, double>> kernel1;
    for (const auto& [x, p] : marginal) kernel1.push_back({{x, 0, 0}, p});
    return translation_chain(1, params.side, kernel1);
}

/// Lattice node index for the chain built by lattice_chain.
inline std::uint32_t lattice_node(int side, int x, int y, int z) {
    return static_cast<std::uint32_t>(x + side * (y + side * z));
}

/// Expected number of steps to reach `targets` from every state, by solving
/// (I - Q) h = 1 over the non-target states. h is 0 on targets.
inline std::vector<double> exact_hitting_steps(const MarkovChain& chain, std::span<const std::uint32_t> targets) {
    const std::size_t n = chain.states();
    detail::require(n >= 1 && n <= kMaxExactStates, "exact_hitting_steps: chain must have 1..8000 states");
    detail::require(!targets.empty(), "exact_hitting_steps: target set is empty");
    std::vector<char> is_target(n, 0);
    for (auto t : targets) {
        detail::require(t < n, "exact_hitting_steps: target index out of range");
        is_target[t] = 1;
    }

    // Every state must reach the target set, or (I - Q) is singular.
    std::vector<std::vector<std::uint32_t>> reverse(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& [to, p] : chain.rows[s]) {
            if (p > 0.0) reverse[to].push_back(static_cast<std::uint32_t>(s));
        }
    }
    std::vector<char> reaches(is_target);
    std::deque<std::uint32_t> queue(targets.begin(), targets.end());
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto u : reverse[v]) {
            if (!reaches[u]) {
                reaches[u] = 1;
                queue.push_back(u);
            }
        }
    }
    if (std::find(reaches.begin(), reaches.end(), 0) != reaches.end()) {
        throw DiagnosticError("exact_hitting_steps: some states cannot reach the target (singular system)");
    }

    std::vector<std::int64_t> slot(n, -1);
    std::size_t free_states = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (!is_target[s]) slot[s] = static_cast<std::int64_t>(free_states++);
    }
    std::vector<double> h(n, 0.0);
    if (free_states == 0) return h;

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(free_states),
                                                  static_cast<Eigen::Index>(free_states));
    for (std::size_t s = 0; s < n; ++s) {
        if (slot[s] < 0) continue;
        for (const auto& [to, p] : chain.rows[s]) {
            if (slot[to] >= 0) a(slot[s], slot[to]) -= p;
        }
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(free_states));
    const Eigen::VectorXd sol = a.partialPivLu().solve(ones);
    for (std::size_t s = 0; s < n; ++s) {
        if (slot[s] >= 0) h[s] = sol(slot[s]);
    }
    return h;
}

/// Total-variation distance from the uniform distribution.
inline double tv_to_uniform(std::span<const double> p) {
    const double u = 1.0 / static_cast<double>(p.size());
    double tv = 0.0;
    for (double x : p) tv += std::abs(x - u);
    return tv / 2.0;
}

/// One step of the distribution p -> p P.
inline std::vector<double> evolve(const MarkovChain& chain, std::span<const double> p) {
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s] == 0.0) continue;
        for (const auto& [to, q] : chain.rows[s]) next[to] += p[s] * q;
    }
    return next;
}

/// First step at which the total-variation distance to uniform drops below
/// epsilon, starting from `initial`. The chains built here are symmetric, so
/// uniform is their stationary law.
inline std::uint64_t mixing_steps_tv(const MarkovChain& chain, std::vector<double> initial, double epsilon,
                                     std::uint64_t max_steps = 10'000'000) {
    detail::require(initial.size() == chain.states(), "mixing_steps_tv: distribution size mismatch");
    detail::require(epsilon > 0.0 && epsilon <= 0.5, "mixing_steps_tv: epsilon must lie in (0, 1/2]");
    for (std::uint64_t t = 0; t <= max_steps; ++t) {
        if (tv_to_uniform(initial) < epsilon) return t;
        initial = evolve(chain, initial);
    }
    throw DiagnosticError("mixing_steps_tv: not mixed within " + std::to_string(max_steps) + " steps");
}

/// Worst-case start for a transitive chain: a point mass at state 0.
inline std::uint64_t mixing_steps_tv(const MarkovChain& chain, double epsilon) {
    detail::require(chain.states() <= 4096 * 4096, "mixing_steps_tv: chain too large");
    std::vector<double> p(chain.states(), 0.0);
    p[0] = 1.0;
    return mixing_steps_tv(chain, std::move(p), epsilon);
}

}  // namespace levy3d

#include "heomcorr/heom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "heomcorr/integrator.hpp"
#include "heomcorr/measures.hpp"

namespace heomcorr::heom {

std::size_t mode_count(Topology topology) { return topology == Topology::Independent ? 4 : 2; }

namespace {

void enumerate_rec(std::size_t modes, int remaining, AdoIndex& current, std::vector<AdoIndex>& out) {
    if (current.size() == modes) {
        out.push_back(current);
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        current.push_back(c);
        enumerate_rec(modes, remaining - c, current, out);
        current.pop_back();
    }
}

std::vector<AdoIndex> enumerate_simplex(std::size_t modes, int depth) {
    std::vector<AdoIndex> out;
    AdoIndex current;
    current.reserve(modes);
    enumerate_rec(modes, depth, current, out);
    return out;
}

}  // namespace

std::vector<AdoIndex> enumerate_ados(Topology topology, int depth) {
    if (depth < 1) throw ConfigError("truncation depth must be >= 1");
    return enumerate_simplex(mode_count(topology), depth);
}

HierarchyLayout::HierarchyLayout(std::size_t modes, int depth)
    : modes_(modes), depth_(depth), indices_(enumerate_simplex(modes, depth)) {
    if (depth < 1) throw ConfigError("truncation depth must be >= 1");
    std::map<AdoIndex, long> lookup;
    for (std::size_t s = 0; s < indices_.size(); ++s) lookup.emplace(indices_[s], static_cast<long>(s));

    up_.assign(indices_.size() * modes_, -1);
    down_.assign(indices_.size() * modes_, -1);
    for (std::size_t s = 0; s < indices_.size(); ++s) {
        AdoIndex probe = indices_[s];
        for (std::size_t k = 0; k < modes_; ++k) {
            ++probe[k];
            if (auto it = lookup.find(probe); it != lookup.end()) up_[s * modes_ + k] = it->second;
            probe[k] -= 2;
            if (probe[k] >= 0) down_[s * modes_ + k] = lookup.at(probe);
            ++probe[k];
        }
    }
}

long HierarchyLayout::find(const AdoIndex& index) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
    if (it == indices_.end() || *it != index) return -1;
    return static_cast<long>(it - indices_.begin());
}

ComplexMatrix HierarchyState::ado(std::size_t slot) const {
    if (16 * (slot + 1) > ados.size()) throw DimensionError("HierarchyState: slot out of range");
    return ComplexMatrix(4, 4, std::vector<Complex>(ados.begin() + 16 * slot, ados.begin() + 16 * (slot + 1)));
}

namespace {

// Indices of the mode that mirrors k under the adjoint: the two modes of a
// bath are exchanged.
long swapped_slot(const HierarchyLayout& layout, std::size_t slot) {
    AdoIndex idx = layout.index(slot);
    for (std::size_t k = 0; k + 1 < idx.size(); k += 2) std::swap(idx[k], idx[k + 1]);
    return layout.find(idx);
}

}  // namespace

Hierarchy::Hierarchy(Topology topology, ComplexMatrix hamiltonian, std::vector<ComplexMatrix> couplings,
                     std::vector<HierarchyMode> modes, TruncationPolicy policy)
    : topology_(topology),
      hamiltonian_(std::move(hamiltonian)),
      couplings_(std::move(couplings)),
      modes_(std::move(modes)),
      layout_(modes_.size(), policy.depth) {
    if (hamiltonian_.rows() != 4 || hamiltonian_.cols() != 4) throw DimensionError("Hierarchy: H must be 4x4");
    auto to_sparse = [](const ComplexMatrix& m, Complex scale) {
        SparseOp op;
        for (std::uint8_t r = 0; r < 4; ++r)
            for (std::uint8_t c = 0; c < 4; ++c)
                if (m(r, c) != Complex{}) op.push_back({r, c, scale * m(r, c)});
        return op;
    };
    minus_i_h_ = to_sparse(hamiltonian_, Complex{0.0, -1.0});
    for (const auto& q : couplings_) {
        if (q.rows() != 4 || q.cols() != 4) throw DimensionError("Hierarchy: couplings must be 4x4");
        sparse_couplings_.push_back(to_sparse(q, 1.0));
    }
    for (const auto& mode : modes_) {
        if (mode.coupling >= couplings_.size()) throw DimensionError("Hierarchy: mode refers to a missing coupling");
    }

    slot_damping_.resize(layout_.size());
    swap_slot_.resize(layout_.size());
    for (std::size_t s = 0; s < layout_.size(); ++s) {
        Complex damping{};
        const auto& idx = layout_.index(s);
        for (std::size_t k = 0; k < modes_.size(); ++k) damping += static_cast<double>(idx[k]) * modes_[k].rate;
        slot_damping_[s] = damping;
        swap_slot_[s] = swapped_slot(layout_, s);
    }
}

HierarchyState Hierarchy::initial_state(const DensityMatrix& rho0) const {
    HierarchyState state;
    state.ados.assign(state_size(), Complex{});
    const auto src = rho0.matrix().entries();
    std::copy(src.begin(), src.end(), state.ados.begin());
    return state;
}

void Hierarchy::rhs(std::span<const Complex> state, std::span<Complex> derivative) const {
    if (state.size() != state_size() || derivative.size() != state_size()) {
        throw DimensionError("Hierarchy::rhs: state size does not match the index table");
    }
    const std::size_t n_ops = couplings_.size();
    const std::size_t n_modes = modes_.size();
    const long n_slots = static_cast<long>(layout_.size());

#pragma omp parallel for schedule(static)
    for (long s = 0; s < n_slots; ++s) {
        const Complex* rho = state.data() + 16 * s;
        Complex* out = derivative.data() + 16 * s;

        // Accumulated neighbor combinations that Q_j multiplies from the left
        // and from the right; at most two distinct couplings.
        std::array<std::array<Complex, 16>, 2> left{};
        std::array<std::array<Complex, 16>, 2> right{};

        for (std::size_t k = 0; k < n_modes; ++k) {
            const auto& mode = modes_[k];
            auto& l = left[mode.coupling];
            auto& r = right[mode.coupling];
            if (const long up = layout_.up(s, k); up >= 0) {
                const Complex* nb = state.data() + 16 * up;
                for (int i = 0; i < 16; ++i) {
                    l[i] += mode.raise_left * nb[i];
                    r[i] += mode.raise_right * nb[i];
                }
            }
            if (const long down = layout_.down(s, k); down >= 0) {
                const Complex* nb = state.data() + 16 * down;
                const double occupation = layout_.index(s)[k];
                const Complex cl = occupation * mode.lower_left;
                const Complex cr = occupation * mode.lower_right;
                for (int i = 0; i < 16; ++i) {
                    l[i] += cl * nb[i];
                    r[i] += cr * nb[i];
                }
            }
        }

        const Complex damping = slot_damping_[s];
        for (int i = 0; i < 16; ++i) out[i] = -damping * rho[i];
        // -i[H, rho]
        for (const auto& e : minus_i_h_) {
            for (int c = 0; c < 4; ++c) out[4 * e.row + c] += e.value * rho[4 * e.col + c];
            for (int r = 0; r < 4; ++r) out[4 * r + e.col] -= rho[4 * r + e.row] * e.value;
        }
        for (std::size_t j = 0; j < n_ops; ++j) {
            for (const auto& e : sparse_couplings_[j]) {
                for (int c = 0; c < 4; ++c) out[4 * e.row + c] += e.value * left[j][4 * e.col + c];
                for (int r = 0; r < 4; ++r) out[4 * r + e.col] += right[j][4 * r + e.row] * e.value;
            }
        }
    }
}

double Hierarchy::conjugation_defect(std::span<const Complex> state) const {
    double worst = 0.0;
    for (std::size_t s = 0; s < layout_.size(); ++s) {
        const long partner = swap_slot_[s];
        if (partner < 0) continue;
        const Complex* a = state.data() + 16 * s;
        const Complex* b = state.data() + 16 * partner;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(b[4 * r + c] - std::conj(a[4 * c + r])));
    }
    return worst;
}

namespace {

double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }  // (-1)^k

// Converts coefficients of X^x and X^o into left/right multipliers:
// cx [X, rho] + co {X, rho} = (cx + co) X rho + (co - cx) rho X.
void split(Complex commutator, Complex anticommutator, Complex& left, Complex& right) {
    left = commutator + anticommutator;
    right = anticommutator - commutator;
}

}  // namespace

Hierarchy make_independent(const SystemSpec& sys, const BathSpec& bath_a, const BathSpec& bath_b,
                           TruncationPolicy policy) {
    sys.validate();
    bath_a.validate();
    bath_b.validate();
    std::vector<HierarchyMode> modes;
    const BathSpec* baths[2] = {&bath_a, &bath_b};
    for (std::size_t a = 0; a < 2; ++a) {
        const BathSpec& bath = *baths[a];
        const Complex nu_plus{bath.gamma, bath.omega_c};
        const Complex nu_minus{bath.gamma, -bath.omega_c};
        const double prefactor = bath.lambda * bath.gamma / 4.0;
        for (int k = 1; k <= 2; ++k) {
            HierarchyMode mode{};
            mode.coupling = a;
            mode.rate = (k == 1) ? nu_plus : nu_minus;
            // (-1)^k Q^x rho_{+e_k}
            split(sign_power(k), 0.0, mode.raise_left, mode.raise_right);
            // (lambda gamma / 4) [Q^o + (-1)^{k+1} Q^x] rho_{-e_k}
            split(prefactor * sign_power(k + 1), prefactor, mode.lower_left, mode.lower_right);
            modes.push_back(mode);
        }
    }
    return Hierarchy(Topology::Independent, system_hamiltonian(sys), coupling_operators(Topology::Independent),
                     std::move(modes), policy);
}

Hierarchy make_common(const SystemSpec& sys, const BathSpec& bath, TruncationPolicy policy) {
    sys.validate();
    bath.validate();
    const Complex nu_plus{bath.gamma, bath.omega_c};
    const Complex nu_minus{bath.gamma, -bath.omega_c};
    const Complex i{0.0, 1.0};
    const Complex prefactor = -i * bath.gamma * bath.lambda / 4.0;
    std::vector<HierarchyMode> modes;
    for (int k = 1; k <= 2; ++k) {
        HierarchyMode mode{};
        mode.coupling = 0;
        mode.rate = (k == 1) ? nu_minus : nu_plus;
        // -i V^x rho_{+e_k}
        split(-i, 0.0, mode.raise_left, mode.raise_right);
        // -(i gamma lambda / 4) [V^x + (-1)^k V^o] rho_{-e_k}
        split(prefactor, prefactor * sign_power(k), mode.lower_left, mode.lower_right);
        modes.push_back(mode);
    }
    return Hierarchy(Topology::Common, system_hamiltonian(sys), coupling_operators(Topology::Common),
                     std::move(modes), policy);
}

Hierarchy make_hierarchy(const SystemSpec& sys, const BathSpec& bath, TruncationPolicy policy) {
    if (bath.topology == Topology::Independent) return make_independent(sys, bath, bath, policy);
    return make_common(sys, bath, policy);
}

Trajectory integrate(const Hierarchy& hierarchy, const DensityMatrix& rho0, std::span<const double> t_grid,
                     double dt, DriftLimits limits) {
    std::vector<std::size_t> steps;
    try {
        steps = steps_between_samples(t_grid, dt);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    HierarchyState state = hierarchy.initial_state(rho0);
    Rk4Stepper stepper(hierarchy.state_size());
    auto rhs = [&](std::span<const Complex> y, std::span<Complex> dy) { hierarchy.rhs(y, dy); };

    Trajectory traj;
    traj.times.reserve(t_grid.size());
    traj.states.reserve(t_grid.size());
    traj.diagnostics.reserve(t_grid.size());
    std::size_t done = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (std::size_t n = 0; n < steps[i]; ++n) {
            stepper.step(state.ados, dt, rhs);
            ++done;
        }
        state.t = static_cast<double>(done) * dt;

        ComplexMatrix rho = state.physical();
        std::ostringstream context;
        context << "hierarchy depth " << hierarchy.layout().depth() << ", dt " << dt;
        const SampleDiagnostics diag = check_sample(rho, limits, t_grid[i], context.str());
        traj.max_conjugation_defect = std::max(traj.max_conjugation_defect, hierarchy.conjugation_defect(state.ados));
        traj.times.push_back(t_grid[i]);
        traj.states.push_back(DensityMatrix::unchecked(std::move(rho)));
        traj.diagnostics.push_back(diag);
    }
    return traj;
}

namespace {

struct Observed {
    std::vector<double> concurrence;
    std::vector<double> discord;
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

Observed observe(const Trajectory& traj) {
    Observed o;
    o.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& rho = traj.states[i];
        o.concurrence.push_back(measures::concurrence(rho));
        o.discord.push_back(measures::discord(rho).discord);
        o.max_trace_error = std::max(o.max_trace_error, traj.diagnostics[i].trace_error);
        o.min_eigenvalue = std::min(o.min_eigenvalue, traj.diagnostics[i].min_eigenvalue);
    }
    return o;
}

double max_delta(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

ConvergenceReport converge(const ConvergenceScenario& scenario, double tolerance, ConvergenceOptions options) {
    if (!(tolerance > 0.0)) throw ConfigError("convergence tolerance must be > 0");
    ConvergenceReport report{1, options.initial_dt, {}};
    if (std::isinf(tolerance)) return report;

    // Runs are keyed by (depth, halvings of initial_dt).
    std::map<std::pair<int, int>, Observed> cache;
    auto run = [&](int depth, int halvings) -> const Observed& {
        const auto key = std::make_pair(depth, halvings);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const double dt = options.initial_dt / std::ldexp(1.0, halvings);
        const Hierarchy h = make_hierarchy(scenario.system, scenario.bath, TruncationPolicy{depth});
        return cache.emplace(key, observe(integrate(h, scenario.initial, scenario.t_grid, dt))).first->second;
    };

    int depth = 1;
    int halvings = 0;
    while (true) {
        const double dt = options.initial_dt / std::ldexp(1.0, halvings);
        if (depth > options.max_depth || dt < options.min_dt) {
            std::ostringstream msg;
            msg << "scenario \"" << scenario.name << "\" did not converge to tolerance " << tolerance
                << " by depth " << options.max_depth << " (last tried depth " << depth << ", dt " << dt << ")";
            throw ToleranceAbort(msg.str());
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            const Observed& coarse = run(depth, halvings);
            const Observed& fine = run(depth + 2, halvings + 1);
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            ConvergenceRow row{depth,
                               dt,
                               max_delta(coarse.concurrence, fine.concurrence),
                               max_delta(coarse.discord, fine.discord),
                               make_hierarchy(scenario.system, scenario.bath, TruncationPolicy{depth}).layout().size(),
                               wall,
                               coarse.max_trace_error,
                               coarse.min_eigenvalue};
            report.rows.push_back(row);
            if (row.max_delta_concurrence < tolerance && row.max_delta_discord < tolerance) {
                report.depth = depth;
                report.dt = dt;
                return report;
            }
            // Refine whichever parameter dominates the discrepancy.
            const Observed& half_step = run(depth, halvings + 1);
            const double step_error = std::max(max_delta(coarse.concurrence, half_step.concurrence),
                                               max_delta(coarse.discord, half_step.discord));
            if (step_error >= 0.5 * tolerance)
                ++halvings;
            else
                depth += 2;
        } catch (const ToleranceAbort& e) {
            if (e.unstable())
                ++halvings;
            else
                depth += 2;
        }
    }
}

}  // namespace heomcorr::heom

#pragma once

// Hierarchy equations of motion for two qubits in Lorentzian baths at zero
// temperature, for two independent baths or one common bath.
//
// Each bath correlation is a single complex exponential, so every bath
// contributes two hierarchy "modes": one decaying at gamma + i omega_c and
// one at gamma - i omega_c. An auxiliary density operator (ADO) is labelled
// by a multi-index with one occupation per mode; the all-zero index holds
// the physical reduced density matrix.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heomcorr/model.hpp"
#include "heomcorr/operators.hpp"
#include "heomcorr/trajectory.hpp"

namespace heomcorr::heom {

/// (n1, n2, m1, m2) for independent baths, (n1, n2) for a common bath.
using AdoIndex = std::vector<int>;

inline int depth(const AdoIndex& index) {
    int d = 0;
    for (int c : index) d += c;
    return d;
}

std::size_t mode_count(Topology topology);

/// All multi-indices with component sum <= depth in lexicographic order
/// (the all-zero index first).
std::vector<AdoIndex> enumerate_ados(Topology topology, int depth);

struct TruncationPolicy {
    int depth = 4;  // hierarchy tiers kept; deeper ADOs are zero
};

/// Dense enumeration of the index simplex with neighbor tables.
class HierarchyLayout {
public:
    HierarchyLayout(std::size_t modes, int depth);

    std::size_t size() const { return indices_.size(); }
    std::size_t modes() const { return modes_; }
    int depth() const { return depth_; }
    const AdoIndex& index(std::size_t slot) const { return indices_[slot]; }
    /// Slot of index + e_k, or -1 when that index lies above the truncation.
    long up(std::size_t slot, std::size_t k) const { return up_[slot * modes_ + k]; }
    /// Slot of index - e_k, or -1 when component k is zero.
    long down(std::size_t slot, std::size_t k) const { return down_[slot * modes_ + k]; }
    /// Slot of the given index, or -1.
    long find(const AdoIndex& index) const;

private:
    std::size_t modes_;
    int depth_;
    std::vector<AdoIndex> indices_;
    std::vector<long> up_;
    std::vector<long> down_;
};

/// One hierarchy mode. The tier-raising term contributes
///   raise_left * Q rho_{n+e_k} + raise_right * rho_{n+e_k} Q
/// and the tier-lowering term
///   n_k (lower_left * Q rho_{n-e_k} + lower_right * rho_{n-e_k} Q).
struct HierarchyMode {
    std::size_t coupling;  // index into Hierarchy::couplings
    Complex rate;          // decay rate nu_k multiplying n_k
    Complex raise_left, raise_right;
    Complex lower_left, lower_right;
};

struct HierarchyState {
    double t = 0.0;
    std::vector<Complex> ados;  // 16 entries per slot, row-major 4x4

    ComplexMatrix ado(std::size_t slot) const;
    ComplexMatrix physical() const { return ado(0); }
};

/// Linear generator of one hierarchy. Build with make_independent or
/// make_common.
class Hierarchy {
public:
    Hierarchy(Topology topology, ComplexMatrix hamiltonian, std::vector<ComplexMatrix> couplings,
              std::vector<HierarchyMode> modes, TruncationPolicy policy);

    Topology topology() const { return topology_; }
    const HierarchyLayout& layout() const { return layout_; }
    const std::vector<HierarchyMode>& modes() const { return modes_; }
    const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<ComplexMatrix>& couplings() const { return couplings_; }
    std::size_t state_size() const { return 16 * layout_.size(); }

    /// Hierarchy state at t = 0: rho0 in slot 0, every other ADO zero.
    HierarchyState initial_state(const DensityMatrix& rho0) const;

    /// d/dt of the stacked ADO vector. Throws DimensionError when the
    /// spans do not match the layout.
    void rhs(std::span<const Complex> state, std::span<Complex> derivative) const;

    /// max over slots of |rho_{swap(n)} - rho_n^dagger|, where swap exchanges
    /// the two modes of each bath.
    double conjugation_defect(std::span<const Complex> state) const;

private:
    struct Entry {
        std::uint8_t row, col;
        Complex value;
    };
    using SparseOp = std::vector<Entry>;

    Topology topology_;
    ComplexMatrix hamiltonian_;
    std::vector<ComplexMatrix> couplings_;
    std::vector<HierarchyMode> modes_;
    HierarchyLayout layout_;
    SparseOp minus_i_h_;
    std::vector<SparseOp> sparse_couplings_;
    std::vector<Complex> slot_damping_;
    std::vector<long> swap_slot_;
};

/// Two independent baths, one per qubit, each with coupling sigma_x:
///   d rho_{n,m}/dt = -(i H^x + n.nu_A + m.nu_B) rho_{n,m}
///     + sum_k (-1)^k Q_A^x rho_{n+e_k,m}
///     + (lambda_A gamma_A / 4) sum_k n_k [Q_A^o + (-1)^{k+1} Q_A^x] rho_{n-e_k,m}
///     + (the same for B acting on m)
/// with nu = (gamma + i omega_c, gamma - i omega_c), X^x = [X, .], X^o = {X, .}.
Hierarchy make_independent(const SystemSpec& sys, const BathSpec& bath_a, const BathSpec& bath_b,
                           TruncationPolicy policy);

/// One bath coupled through V = sigma_x^A + sigma_x^B:
///   d rho_n/dt = -(i H^x + n.nu) rho_n - i sum_k V^x rho_{n+e_k}
///     - (i gamma lambda / 4) sum_k n_k [V^x + (-1)^k V^o] rho_{n-e_k}
/// Mode 1 carries the conjugate bath memory and decays at gamma - i omega_c,
/// mode 2 at gamma + i omega_c.
Hierarchy make_common(const SystemSpec& sys, const BathSpec& bath, TruncationPolicy policy);

/// Builds the hierarchy matching bath.topology (identical baths for the
/// independent case).
Hierarchy make_hierarchy(const SystemSpec& sys, const BathSpec& bath, TruncationPolicy policy);

/// Fixed-step RK4 over the full hierarchy, sampling rho_0 on t_grid.
/// Throws ToleranceAbort when a sample leaves `limits` or goes non-finite.
Trajectory integrate(const Hierarchy& hierarchy, const DensityMatrix& rho0, std::span<const double> t_grid,
                     double dt, DriftLimits limits = {});

/// Scenario description consumed by converge().
struct ConvergenceScenario {
    std::string name;
    SystemSpec system;
    BathSpec bath;
    DensityMatrix initial;
    std::vector<double> t_grid;
};

struct ConvergenceRow {
    int depth;
    double dt;
    double max_delta_concurrence;
    double max_delta_discord;
    std::size_t ado_count;
    double wall_time;  // seconds for the (depth, dt) / (depth + 2, dt / 2) pair
    double max_trace_error;
    double min_eigenvalue;
};

struct ConvergenceReport {
    int depth;
    double dt;
    std::vector<ConvergenceRow> rows;
};

struct ConvergenceOptions {
    double initial_dt = 0.05;
    int max_depth = 40;
    double min_dt = 1e-4;
};

/// Smallest depth (from 1, in steps of 2) and largest dt (halving from
/// 0.05) whose concurrence and discord trajectories differ from the
/// (depth + 2, dt / 2) refinement by less than `tolerance` at every sample.
/// An infinite tolerance returns (1, initial_dt) without integrating.
ConvergenceReport converge(const ConvergenceScenario& scenario, double tolerance,
                           ConvergenceOptions options = {});

}  // namespace heomcorr::heom

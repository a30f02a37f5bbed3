#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tentkit/funcspaces.hpp"
#include "tentkit/semigroup.hpp"

namespace tentkit {

// Time nodes used for Duhamel integrals: 0, geometric sub-levels below t_min
// (same ratio rho, down to depth * t_min), then the grid ladder itself. The
// sub-levels resolve the initial layer that rough coefficients create on
// the h^2 time scale.
struct IntegrationLadder {
    std::vector<double> nodes; // nodes[0] = 0
    int grid_offset = 0;       // nodes[grid_offset + k] == grid.time(k)

    static constexpr double kDefaultDepth = 1e-4;
    static IntegrationLadder for_grid(const GridSpec& grid, double depth = kDefaultDepth);
};

// A source s -> g(s) on the grid space: a callable, or samples on a set of
// nodes joined piecewise linearly in t.
class TimeSource {
public:
    using Fn = std::function<SpatialField(double)>;

    TimeSource() = default;
    static TimeSource zero(const GridSpec& grid, int components);
    static TimeSource from_function(const GridSpec& grid, int components, Fn fn);
    // Ladder samples; below t_min the value at_zero (when given) is joined
    // linearly to F(t_min), otherwise F(t_min) is held constant.
    static TimeSource from_field(const SpaceTimeField& F, std::optional<SpatialField> at_zero = std::nullopt);
    static TimeSource from_nodes(const GridSpec& grid, std::vector<double> nodes, std::vector<SpatialField> values);

    SpatialField at(double s) const;
    const GridSpec& grid() const { return grid_; }
    int components() const { return comps_; }
    bool is_zero() const { return zero_; }
    // samples at the grid ladder
    SpaceTimeField on_ladder() const;

private:
    GridSpec grid_{};
    int comps_ = 1;
    bool zero_ = true;
    Fn fn_;
};

struct CauchyProblem {
    std::optional<SpatialField> u0;
    std::optional<TimeSource> F; // vector, divergence-form source
    std::optional<TimeSource> f; // scalar source
};

// u(tau_i) at every ladder node for u' + Lu = g, u(0) = init (zero when
// null), by exponential-integrator slabs with g piecewise quadratic
// between nodes (each slab uses its end nodes plus the preceding node).
std::vector<SpatialField> integrate_nodes(const Semigroup& sg, const IntegrationLadder& ladder, const TimeSource& g,
                                          const SpatialField* init = nullptr);
SpaceTimeField restrict_to_grid(const GridSpec& grid, const IntegrationLadder& ladder,
                                const std::vector<SpatialField>& values);

// G applied level by level.
SpaceTimeField gradient_field(const DiscreteGenerator& gen, const SpaceTimeField& u);

// E_L(u0)(t) = e^{-tL} u0
SpaceTimeField propagate(const Semigroup& sg, const SpatialField& u0);
// R_{1/2}(F)(t) = int_0^t e^{-(t-s)L} div_h F(s) ds
SpaceTimeField lions_op(const Semigroup& sg, const TimeSource& F, double depth = IntegrationLadder::kDefaultDepth);
// R_0(F)(t) = int_0^t G e^{-(t-s)L} div_h F(s) ds; G commutes with the
// quadrature, so this is G of lions_op level by level.
SpaceTimeField lions_grad_op(const Semigroup& sg, const TimeSource& F,
                             double depth = IntegrationLadder::kDefaultDepth);
// L_1(f)(t) = int_0^t e^{-(t-s)L} f(s) ds
SpaceTimeField source_op(const Semigroup& sg, const TimeSource& f, double depth = IntegrationLadder::kDefaultDepth);
// propagate(u0) + lions_op(F) + source_op(f)
SpaceTimeField solve(const Semigroup& sg, const CauchyProblem& problem,
                     double depth = IntegrationLadder::kDefaultDepth);

// (sup_t ||u(t)||_2 + ||G u||_{L^2(dt dx)}) / (||u0||_2 + ||F||_{L^2(dt dx)})
double l2_estimate_constant(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem);

// ---- weak formulation -------------------------------------------------------

// phi(t, x) = b(log t) chi(x): b a smooth bump on [lam_lo, lam_hi], chi a
// smooth bump of the given radius around the center point.
struct TestFunction {
    double lam_lo = 0.0, lam_hi = 0.0;
    double cx = 0.0, cy = 0.0;
    double radius = 0.0;

    double time_part(double t) const;
    double time_derivative(double t) const;
    double space_part(const GridSpec& grid, int cell) const;
};

// Deterministic bank; time supports keep 15% of the log-ladder clear at
// both ends so they vanish on the first and last two levels.
std::vector<TestFunction> default_testbank(const GridSpec& grid, int size = 12, std::uint64_t seed = 12);

struct WeakResidualRecord {
    double max_residual = 0.0;        // max over the bank of |R(phi)| / N(phi)
    std::vector<double> per_test;
};

// R(phi) = sum_k [ <(u_{k+1} - u_{k-1})/2, phi_k>
//                  + w_k ( <Â G u_k, G phi_k> - <f_k, phi_k> + <F_k, G phi_k> ) ]
// with w_k = (t_{k+1} - t_{k-1})/2, the summation-by-parts form of
// -iint u d_t phi + iint A grad u . grad phi - (f, phi) + (F, grad phi);
// N(phi)^2 = sum_k w_k (||phi_k||^2 + ||G phi_k||^2 + ||d_t phi_k||^2).
WeakResidualRecord weak_residual(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                                 const std::vector<TestFunction>& bank);

// ---- energy inequalities ----------------------------------------------------

struct CaccioppoliGeometry {
    double a = 0.0, c = 0.0, b = 0.0; // a < c < b, b a ladder node
    int center = 0;
    double radius = 0.0;
};

struct CaccioppoliRecord {
    double lhs_trace = 0.0, rhs_trace = 0.0, constant_trace = 0.0;
    double lhs_gradient = 0.0, rhs_gradient = 0.0, constant_gradient = 0.0;
    bool pass = false;
};

CaccioppoliRecord caccioppoli_check(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                                    const CaccioppoliGeometry& geometry, double budget = 64.0);

struct EnergyRecord {
    double beta = 0.0;
    Exponent p = Exponent::finite(2.0);
    double grad_u = 0.0, u_norm = 0.0, F_norm = 0.0, f_norm = 0.0;
    double constant = 0.0;
    bool pass = false;
};

// ||G u||_{T^p_{beta+1/2}} <= C (||u||_{T^p_{beta+1}} + ||F||_{T^p_{beta+1/2}} + ||f||_{T^p_beta})
EnergyRecord energy_tent_check(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                               double beta, Exponent p, double budget = 64.0);

// ---- explicit formulae ------------------------------------------------------

// Relative L^2(dt dx) residuals over the ladder of
//  (1) R^L(F) = R^Delta(F~),  F~ = F + (Â - I) G R^L(F)
//  (2) E_L(u0) = E_Delta(u0) + R^L((Â - I) G E_Delta(u0))
//  (3) E_L(u0) = E_Delta(u0) + R^Delta((Â - I) G E_L(u0))
// Identity (1) needs F, (2) and (3) need u0; missing ones are nullopt.
struct DuhamelRecord {
    std::optional<double> lions;
    std::optional<double> semigroup_via_L;
    std::optional<double> semigroup_via_delta;
    double max_residual() const;
};

DuhamelRecord duhamel_identities(const Semigroup& sg_L, const Semigroup& sg_delta,
                                 const std::optional<SpatialField>& u0, const std::optional<TimeSource>& F,
                                 double depth = IntegrationLadder::kDefaultDepth);

// ---- traces -----------------------------------------------------------------

enum class TraceMode { pairing, Lp, slice_div };

struct TraceRecord {
    TraceMode mode = TraceMode::pairing;
    std::vector<double> times;  // descending, t_max -> t_min
    std::vector<double> values;
    double fitted_rate = 0.0;   // slope of log value against log t
    bool decreasing = false;    // values non-increasing as t decreases
    double final_over_initial = 0.0;
    std::string theory;         // applicable row of the convergence table, or "unverified-by-theory"
};

// Applicable row for u = R^L(F) with F in T^p_{beta+1/2}.
std::string trace_theory_label(double beta, Exponent p, TraceMode mode);

TraceRecord trace_convergence(const SpaceTimeField& u, const std::optional<SpatialField>& target, TraceMode mode,
                              Exponent p = Exponent::finite(2.0), double delta = 0.0, double beta = 0.0);

// ---- endpoint operator ------------------------------------------------------

struct EndpointRecord {
    SpaceTimeField field;        // t -> e^{-tL} div_h f
    double tent = 0.0;           // ||.||_{T^p_0}
    double f_norm = 0.0;         // ||f||_p
    std::optional<double> ratio; // p = 2 only: tent / ||f||_2
};

EndpointRecord endpoint_divergence_semigroup(const Semigroup& sg, const SpatialField& f, Exponent p);

} // namespace tentkit

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "tentkit/generator.hpp"
#include "tentkit/matrix_functions.hpp"

namespace tentkit {

// How e^{-tL} is evaluated.
//  fourier          exact DFT multiplier; requires A = I
//  hermitian_eigen  unitary eigendecomposition; requires L Hermitian
//  pade             dense Pade-13 scaling and squaring; any coefficients
//  uniformization   Poisson series in P = I - L/mu; requires a real
//                   M-matrix, keeps entrywise relative accuracy of tails
//  automatic        fourier, else hermitian_eigen, else pade
enum class PropagationMethod { automatic, fourier, hermitian_eigen, pade, uniformization };

std::string to_string(PropagationMethod m);
PropagationMethod method_from_string(const std::string& name);

// The semigroup of one generator. Every route treats the mean separately
// (constants are invariant and means are preserved since L^H 1 = 0), which
// makes e^{-tL} 1 = 1 exact. Caches are filled lazily under a lock; after
// warm-up all calls are safe to make concurrently.
class Semigroup {
public:
    explicit Semigroup(DiscreteGenerator generator, PropagationMethod method = PropagationMethod::automatic);

    const DiscreteGenerator& generator() const { return *gen_; }
    const GridSpec& grid() const { return gen_->grid(); }
    PropagationMethod method() const { return method_; }

    // e^{-tL} f, componentwise for vector fields.
    SpatialField apply(const SpatialField& f, double t) const;
    // G e^{-tL} f for scalar f, t > 0.
    SpatialField grad_apply(const SpatialField& f, double t) const;
    // One exponential-integrator slab for u' + Lu = g on [0, dt] with
    // g(theta dt) = g0 + theta (g1 - g0) + theta (theta - 1) c:
    // e^{-dt L} u + dt (phi1 g0 + phi2 (g1 - g0) + (2 phi3 - phi2) c), phi_k at -dt L.
    // Without c the source is linear.
    SpatialField slab_step(const SpatialField& u, const SpatialField& g0, const SpatialField& g1, double dt,
                           const SpatialField* c = nullptr) const;

    Mat dense_exponential(double t) const;

private:
    struct Eig;
    struct Unif;

    void split_mean(const SpatialField& f, SpatialField& zero_mean, std::vector<cplx>& means) const;
    SpatialField route_apply(const SpatialField& f0, double t) const;
    SpatialField route_slab(const SpatialField& u, const SpatialField& g0, const SpatialField& g1,
                            const SpatialField& c, double dt) const;
    const Eig& eig() const;
    const Unif& unif() const;
    const Mat& pade_exp(double t) const;
    const PhiFunctions& pade_phi(double dt) const;

    std::shared_ptr<const DiscreteGenerator> gen_;
    PropagationMethod method_;
    mutable std::mutex mutex_;
    mutable std::once_flag eig_once_, unif_once_;
    mutable std::shared_ptr<Eig> eig_;
    mutable std::shared_ptr<Unif> unif_;
    mutable std::map<double, Mat> exp_cache_;
    mutable std::map<double, PhiFunctions> phi_cache_;
};

} // namespace tentkit

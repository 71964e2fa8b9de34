#pragma once

#include <functional>
#include <vector>

#include "stingray/linalg.hpp"

namespace stingray {

// Schreier-Sims for matrix groups acting on the vectors of GF(Q)^d.
// Points are vectors encoded as sum v_i Q^i; base points are unit vectors.
class MatrixBSGS {
public:
    static constexpr uint64_t kMaxPoints = 1ull << 20;

    struct Options {
        unsigned random_sift_target = 20;   // consecutive trivial sifts that end the random phase
        unsigned verify_per_level = 20;     // random Schreier generators sifted per level afterwards
        BigInt stop_at = 0;                 // stop once the order reaches this (a known upper bound)
        uint64_t seed = 0x5c4e1e75ULL;
        // run the full deterministic Schreier generator test when
        // sum over levels of |orbit| * |gens| stays below this
        uint64_t deterministic_budget = 20000;
    };

    MatrixBSGS(FieldPtr F, size_t d);
    static MatrixBSGS build(const std::vector<Matrix>& gens, FieldPtr F, size_t d, const Options& opt);
    static MatrixBSGS build(const std::vector<Matrix>& gens, FieldPtr F, size_t d) {
        return build(gens, std::move(F), d, Options{});
    }

    BigInt order() const;
    bool exact() const { return exact_; }  // true when the deterministic test (or the stop bound) certified the order
    size_t base_length() const { return levels_.size(); }
    std::vector<uint64_t> orbit_sizes() const;
    bool contains(const Matrix& g) const;
    // residue and the level at which sifting stopped (== base_length() when it went through)
    std::pair<Matrix, size_t> sift(const Matrix& g) const;
    // enumerate every element once (transversal products)
    void for_each_element(const std::function<void(const Matrix&)>& fn) const;
    const std::vector<Matrix>& strong_generators() const { return S_; }

    uint64_t encode(const Vec& v) const;
    Vec decode(uint64_t x) const;
    uint64_t apply(size_t gen, uint64_t x) const;
    uint64_t apply_matrix(const Matrix& g, uint64_t x) const;

private:
    struct Level {
        size_t base_coord;
        uint64_t base_point;
        std::vector<size_t> gens;       // indices into S_
        std::vector<uint64_t> orbit;
        std::vector<int32_t> label;     // -1 absent, -2 base, else index into S_ reaching the point
    };
    uint64_t apply_inv(size_t gen, uint64_t x) const;
    void add_strong(const Matrix& h, size_t level);
    void extend_orbit(Level& L, size_t new_gen);
    Matrix transversal(const Level& L, uint64_t x) const;      // u_x with base^u_x = x
    Matrix transversal_inv_apply(const Level& L, uint64_t x, Matrix h) const;  // h * u_x^{-1}
    void random_phase(const std::vector<Matrix>& gens, const Options& opt);
    bool deterministic_phase(const Options& opt);
    void verify_phase(const Options& opt);
    void new_level_for(const Matrix& h);

    FieldPtr F_;
    size_t d_;
    uint64_t Q_;
    uint64_t npts_;
    std::vector<uint64_t> qpow_;
    std::vector<Matrix> S_, Sinv_;
    std::vector<std::vector<uint32_t>> rowmask_;  // GF(2) fast path
    std::vector<Level> levels_;
    bool exact_ = false;
};

BigInt schreier_sims_order(const std::vector<Matrix>& gens, FieldPtr F, size_t d,
                           const MatrixBSGS::Options& opt = MatrixBSGS::Options{});

// ---- permutation groups ----
using Perm = std::vector<uint32_t>;  // images, 0-based

Perm perm_identity(size_t n);
Perm perm_mul(const Perm& a, const Perm& b);  // apply a then b
Perm perm_inv(const Perm& a);
Perm perm_pow(const Perm& a, const BigInt& k);
bool perm_is_identity(const Perm& a);
BigInt perm_order(const std::vector<Perm>& gens, size_t n);

}  // namespace stingray

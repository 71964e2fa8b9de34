#include "stingray/bsgs.hpp"

#include <algorithm>

namespace stingray {

namespace {

// product replacement over a generator list, used to feed the random phase
class PRStream {
public:
    PRStream(const std::vector<Matrix>& gens, uint64_t seed, size_t d, FieldPtr F) : rng_(seed) {
        for (auto& g : gens)
            if (!g.is_identity()) base_.push_back(g);
        if (base_.empty()) base_.push_back(Matrix::identity(F, d));
        size_t n = std::max<size_t>(10, base_.size());
        for (size_t i = 0; i < n; ++i) slots_.push_back(base_[i % base_.size()]);
        acc_ = Matrix::identity(F, d);
        for (int i = 0; i < 50; ++i) step();
    }
    Matrix next() {
        for (int i = 0; i < 4; ++i) step();
        return acc_;
    }

private:
    void step() {
        size_t n = slots_.size();
        size_t i = rng_.below(n), j = rng_.below(n - 1);
        if (j >= i) ++j;
        if (rng_.below(2))
            slots_[i] = slots_[i] * slots_[j];
        else
            slots_[i] = slots_[j] * slots_[i];
        acc_ = acc_ * slots_[i];
    }
    Rng rng_;
    std::vector<Matrix> base_, slots_;
    Matrix acc_;
};

}  // namespace

MatrixBSGS::MatrixBSGS(FieldPtr F, size_t d) : F_(std::move(F)), d_(d), Q_(F_->size()) {
    BigInt pts = pow_big(BigInt(Q_), d);
    if (pts > BigInt(std::to_string(kMaxPoints)))
        throw std::domain_error("recognition guard: q^d exceeds 2^20 points");
    npts_ = pts.get_ui();
    qpow_.resize(d + 1);
    qpow_[0] = 1;
    for (size_t i = 1; i <= d; ++i) qpow_[i] = qpow_[i - 1] * Q_;
}

uint64_t MatrixBSGS::encode(const Vec& v) const {
    uint64_t x = 0;
    for (size_t i = d_; i-- > 0;) x = x * Q_ + v[i];
    return x;
}

Vec MatrixBSGS::decode(uint64_t x) const {
    Vec v(d_);
    for (size_t i = 0; i < d_; ++i) {
        v[i] = Elem(x % Q_);
        x /= Q_;
    }
    return v;
}

uint64_t MatrixBSGS::apply_matrix(const Matrix& g, uint64_t x) const {
    const Field& F = *F_;
    uint32_t v[64];
    for (size_t i = 0; i < d_; ++i) {
        v[i] = uint32_t(x % Q_);
        x /= Q_;
    }
    uint64_t out = 0;
    if (Q_ == 2) {
        for (size_t i = 0; i < d_; ++i)
            if (v[i]) {
                const Elem* r = g.row(i);
                for (size_t j = 0; j < d_; ++j) out ^= uint64_t(r[j]) << j;
            }
        return out;
    }
    uint64_t acc[64] = {0};
    if (F.is_prime_field()) {
        for (size_t i = 0; i < d_; ++i) {
            if (!v[i]) continue;
            const Elem* r = g.row(i);
            for (size_t j = 0; j < d_; ++j) acc[j] += uint64_t(v[i]) * r[j];
        }
        for (size_t j = d_; j-- > 0;) out = out * Q_ + acc[j] % Q_;
        return out;
    }
    for (size_t i = 0; i < d_; ++i) {
        if (!v[i]) continue;
        const Elem* r = g.row(i);
        for (size_t j = 0; j < d_; ++j) acc[j] = F.add(Elem(acc[j]), F.mul(v[i], r[j]));
    }
    for (size_t j = d_; j-- > 0;) out = out * Q_ + acc[j];
    return out;
}

uint64_t MatrixBSGS::apply_inv(size_t gen, uint64_t x) const {
    if (Q_ == 2) {
        const auto& m = rowmask_[2 * gen + 1];
        uint64_t out = 0;
        for (size_t i = 0; x; ++i, x >>= 1)
            if (x & 1) out ^= m[i];
        return out;
    }
    return apply_matrix(Sinv_[gen], x);
}

uint64_t MatrixBSGS::apply(size_t gen, uint64_t x) const {
    if (Q_ == 2) {
        const auto& m = rowmask_[2 * gen];
        uint64_t out = 0;
        for (size_t i = 0; x; ++i, x >>= 1)
            if (x & 1) out ^= m[i];
        return out;
    }
    return apply_matrix(S_[gen], x);
}

void MatrixBSGS::new_level_for(const Matrix& h) {
    std::vector<bool> used(d_, false);
    for (auto& L : levels_) used[L.base_coord] = true;
    for (size_t c = 0; c < d_; ++c) {
        if (used[c]) continue;
        bool moved = false;
        for (size_t j = 0; j < d_; ++j)
            if (h(c, j) != (j == c ? 1u : 0u)) moved = true;
        if (!moved) continue;
        Level L;
        L.base_coord = c;
        L.base_point = qpow_[c];
        L.label.assign(npts_, -1);
        L.label[L.base_point] = -2;
        L.orbit.push_back(L.base_point);
        levels_.push_back(std::move(L));
        return;
    }
    throw std::logic_error("MatrixBSGS: residue fixes every unit vector but is not the identity");
}

void MatrixBSGS::extend_orbit(Level& L, size_t s) {
    size_t old = L.orbit.size();
    for (size_t k = 0; k < old; ++k) {
        uint64_t y = apply(s, L.orbit[k]);
        if (L.label[y] == -1) {
            L.label[y] = int32_t(s);
            L.orbit.push_back(y);
        }
    }
    for (size_t k = old; k < L.orbit.size(); ++k) {
        uint64_t x = L.orbit[k];
        for (size_t t : L.gens) {
            uint64_t y = apply(t, x);
            if (L.label[y] == -1) {
                L.label[y] = int32_t(t);
                L.orbit.push_back(y);
            }
        }
    }
}

void MatrixBSGS::add_strong(const Matrix& h, size_t level) {
    if (level == levels_.size()) new_level_for(h);
    size_t idx = S_.size();
    S_.push_back(h);
    Matrix hi = inverse(h);
    Sinv_.push_back(hi);
    if (Q_ == 2) {
        // rowmask_[2k] for S_[k], rowmask_[2k+1] for its inverse
        for (const Matrix* m : {&h, static_cast<const Matrix*>(&hi)}) {
            std::vector<uint32_t> rm(d_);
            for (size_t i = 0; i < d_; ++i) {
                uint32_t w = 0;
                for (size_t j = 0; j < d_; ++j) w |= uint32_t((*m)(i, j)) << j;
                rm[i] = w;
            }
            rowmask_.push_back(rm);
        }
    }
    for (size_t i = 0; i <= level; ++i) {
        levels_[i].gens.push_back(idx);
        extend_orbit(levels_[i], idx);
    }
}

Matrix MatrixBSGS::transversal_inv_apply(const Level& L, uint64_t x, Matrix h) const {
    while (L.label[x] != -2) {
        size_t s = size_t(L.label[x]);
        h = h * Sinv_[s];
        x = apply_inv(s, x);
    }
    return h;
}

Matrix MatrixBSGS::transversal(const Level& L, uint64_t x) const {
    Matrix u = Matrix::identity(F_, d_);
    while (L.label[x] != -2) {
        size_t s = size_t(L.label[x]);
        u = S_[s] * u;
        x = apply_inv(s, x);
    }
    return u;
}

std::pair<Matrix, size_t> MatrixBSGS::sift(const Matrix& g) const {
    Matrix h = g;
    for (size_t i = 0; i < levels_.size(); ++i) {
        const Level& L = levels_[i];
        uint64_t y = 0;
        const Elem* r = h.row(L.base_coord);
        for (size_t j = d_; j-- > 0;) y = y * Q_ + r[j];
        if (L.label[y] == -1) return {h, i};
        h = transversal_inv_apply(L, y, h);
    }
    return {h, levels_.size()};
}

bool MatrixBSGS::contains(const Matrix& g) const {
    if (g.rows() != d_ || g.cols() != d_) return false;
    auto [h, lvl] = sift(g);
    return lvl == levels_.size() && h.is_identity();
}

BigInt MatrixBSGS::order() const {
    BigInt o = 1;
    for (auto& L : levels_) o *= (unsigned long)L.orbit.size();
    return o;
}

std::vector<uint64_t> MatrixBSGS::orbit_sizes() const {
    std::vector<uint64_t> s;
    for (auto& L : levels_) s.push_back(L.orbit.size());
    return s;
}

void MatrixBSGS::random_phase(const std::vector<Matrix>& gens, const Options& opt) {
    for (auto& g : gens) {
        auto [h, j] = sift(g);
        if (!(j == levels_.size() && h.is_identity())) add_strong(h, j);
    }
    if (S_.empty()) return;
    PRStream pr(gens, opt.seed, d_, F_);
    unsigned count = 0;
    while (count < opt.random_sift_target) {
        if (opt.stop_at > 0 && order() >= opt.stop_at) return;
        auto [h, j] = sift(pr.next());
        if (j == levels_.size() && h.is_identity()) {
            ++count;
        } else {
            count = 0;
            add_strong(h, j);
        }
    }
}

void MatrixBSGS::verify_phase(const Options& opt) {
    Rng rng(opt.seed ^ 0xabcdef);
    for (int pass = 0; pass < 64; ++pass) {
        bool added = false;
        for (size_t i = 0; i < levels_.size() && !added; ++i) {
            for (unsigned t = 0; t < opt.verify_per_level; ++t) {
                const Level& L = levels_[i];
                if (L.gens.empty()) break;
                uint64_t x = L.orbit[rng.below(L.orbit.size())];
                size_t s = L.gens[rng.below(L.gens.size())];
                uint64_t y = apply(s, x);
                Matrix sg = transversal_inv_apply(L, y, transversal(L, x) * S_[s]);
                auto [h, j] = sift(sg);
                if (!(j == levels_.size() && h.is_identity())) {
                    add_strong(h, j);
                    added = true;
                    break;
                }
            }
        }
        if (!added) return;
        if (opt.stop_at > 0 && order() >= opt.stop_at) return;
    }
}

bool MatrixBSGS::deterministic_phase(const Options& opt) {
    auto work = [&] {
        uint64_t w = 0;
        for (auto& L : levels_) w += L.orbit.size() * L.gens.size();
        return w;
    };
    while (true) {
        if (work() > opt.deterministic_budget) return false;
        bool added = false;
        for (size_t i = levels_.size(); i-- > 0 && !added;) {
            const Level& L = levels_[i];
            for (size_t k = 0; k < L.orbit.size() && !added; ++k) {
                uint64_t x = L.orbit[k];
                Matrix ux = transversal(L, x);
                for (size_t s : L.gens) {
                    uint64_t y = apply(s, x);
                    if (L.label[y] == int32_t(s) && apply_inv(s, y) == x) continue;  // tree edge
                    Matrix sg = transversal_inv_apply(L, y, ux * S_[s]);
                    auto [h, j] = sift(sg);
                    if (!(j == levels_.size() && h.is_identity())) {
                        add_strong(h, j);
                        added = true;
                        break;
                    }
                }
            }
        }
        if (!added) return true;
    }
}

MatrixBSGS MatrixBSGS::build(const std::vector<Matrix>& gens, FieldPtr F, size_t d, const Options& opt) {
    MatrixBSGS B(F, d);
    for (auto& g : gens)
        if (g.rows() != d || g.cols() != d) throw std::invalid_argument("schreier_sims: generator dimension mismatch");
    B.random_phase(gens, opt);
    if (B.S_.empty()) {
        B.exact_ = true;
        return B;
    }
    if (opt.stop_at > 0 && B.order() >= opt.stop_at) {
        B.exact_ = B.order() == opt.stop_at;
        return B;
    }
    B.verify_phase(opt);
    if (opt.stop_at > 0 && B.order() == opt.stop_at) {
        B.exact_ = true;
        return B;
    }
    B.exact_ = B.deterministic_phase(opt);
    return B;
}

void MatrixBSGS::for_each_element(const std::function<void(const Matrix&)>& fn) const {
    std::vector<std::vector<Matrix>> T(levels_.size());
    for (size_t i = 0; i < levels_.size(); ++i)
        for (uint64_t x : levels_[i].orbit) T[i].push_back(transversal(levels_[i], x));
    std::function<void(size_t, const Matrix&)> rec = [&](size_t i, const Matrix& P) {
        if (i == 0) {
            fn(P);
            return;
        }
        for (const Matrix& t : T[i - 1]) rec(i - 1, P * t);
    };
    rec(levels_.size(), Matrix::identity(F_, d_));
}

BigInt schreier_sims_order(const std::vector<Matrix>& gens, FieldPtr F, size_t d, const MatrixBSGS::Options& opt) {
    return MatrixBSGS::build(gens, std::move(F), d, opt).order();
}

// ---------------------------------------------------------------- permutations

Perm perm_identity(size_t n) {
    Perm p(n);
    for (size_t i = 0; i < n; ++i) p[i] = uint32_t(i);
    return p;
}

Perm perm_mul(const Perm& a, const Perm& b) {
    Perm c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
    return c;
}

Perm perm_inv(const Perm& a) {
    Perm c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[a[i]] = uint32_t(i);
    return c;
}

Perm perm_pow(const Perm& a, const BigInt& k_in) {
    // via cycle decomposition
    const size_t n = a.size();
    Perm out(n);
    std::vector<bool> seen(n, false);
    for (size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<uint32_t> cyc;
        for (uint32_t x = uint32_t(s); !seen[x]; x = a[x]) {
            seen[x] = true;
            cyc.push_back(x);
        }
        BigInt kk = k_in % (unsigned long)cyc.size();
        if (kk < 0) kk += (unsigned long)cyc.size();
        size_t k = kk.get_ui();
        for (size_t i = 0; i < cyc.size(); ++i) out[cyc[i]] = cyc[(i + k) % cyc.size()];
    }
    return out;
}

bool perm_is_identity(const Perm& a) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != i) return false;
    return true;
}

namespace {

class PermBSGS {
public:
    explicit PermBSGS(size_t n) : n_(n) {}

    void build(const std::vector<Perm>& gens) {
        for (auto& g : gens) {
            auto [h, j] = sift(g);
            if (!(j == levels_.size() && perm_is_identity(h))) add_strong(h, j);
        }
        // deterministic Schreier generator closure
        while (true) {
            bool added = false;
            for (size_t i = levels_.size(); i-- > 0 && !added;) {
                for (size_t k = 0; k < levels_[i].orbit.size() && !added; ++k) {
                    uint32_t x = levels_[i].orbit[k];
                    Perm ux = transversal(levels_[i], x);
                    for (size_t s : levels_[i].gens) {
                        uint32_t y = S_[s][x];
                        Perm sg = inv_apply(levels_[i], y, perm_mul(ux, S_[s]));
                        auto [h, j] = sift(sg);
                        if (!(j == levels_.size() && perm_is_identity(h))) {
                            add_strong(h, j);
                            added = true;
                            break;
                        }
                    }
                }
            }
            if (!added) return;
        }
    }

    BigInt order() const {
        BigInt o = 1;
        for (auto& L : levels_) o *= (unsigned long)L.orbit.size();
        return o;
    }

private:
    struct Level {
        uint32_t base;
        std::vector<size_t> gens;
        std::vector<uint32_t> orbit;
        std::vector<int32_t> label;
    };

    std::pair<Perm, size_t> sift(const Perm& g) const {
        Perm h = g;
        for (size_t i = 0; i < levels_.size(); ++i) {
            uint32_t y = h[levels_[i].base];
            if (levels_[i].label[y] == -1) return {h, i};
            h = inv_apply(levels_[i], y, h);
        }
        return {h, levels_.size()};
    }

    Perm inv_apply(const Level& L, uint32_t x, Perm h) const {
        while (L.label[x] != -2) {
            size_t s = size_t(L.label[x]);
            h = perm_mul(h, Sinv_[s]);
            x = Sinv_[s][x];
        }
        return h;
    }

    Perm transversal(const Level& L, uint32_t x) const {
        Perm u = perm_identity(n_);
        while (L.label[x] != -2) {
            size_t s = size_t(L.label[x]);
            u = perm_mul(S_[s], u);
            x = Sinv_[s][x];
        }
        return u;
    }

    void add_strong(const Perm& h, size_t level) {
        if (level == levels_.size()) {
            uint32_t b = 0;
            while (h[b] == b) ++b;
            Level L;
            L.base = b;
            L.label.assign(n_, -1);
            L.label[b] = -2;
            L.orbit.push_back(b);
            levels_.push_back(std::move(L));
        }
        size_t idx = S_.size();
        S_.push_back(h);
        Sinv_.push_back(perm_inv(h));
        for (size_t i = 0; i <= level; ++i) {
            Level& L = levels_[i];
            L.gens.push_back(idx);
            size_t old = L.orbit.size();
            for (size_t k = 0; k < old; ++k) {
                uint32_t y = h[L.orbit[k]];
                if (L.label[y] == -1) {
                    L.label[y] = int32_t(idx);
                    L.orbit.push_back(y);
                }
            }
            for (size_t k = old; k < L.orbit.size(); ++k)
                for (size_t t : L.gens) {
                    uint32_t y = S_[t][L.orbit[k]];
                    if (L.label[y] == -1) {
                        L.label[y] = int32_t(t);
                        L.orbit.push_back(y);
                    }
                }
        }
    }

    size_t n_;
    std::vector<Perm> S_, Sinv_;
    std::vector<Level> levels_;
};

}  // namespace

BigInt perm_order(const std::vector<Perm>& gens, size_t n) {
    if (n > 10000) throw std::domain_error("perm_order: more than 10^4 points");
    for (auto& g : gens)
        if (g.size() != n) throw std::invalid_argument("perm_order: permutation size mismatch");
    PermBSGS B(n);
    B.build(gens);
    return B.order();
}

}  // namespace stingray

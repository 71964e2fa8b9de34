#include "stingray/classical.hpp"

#include <istream>
#include <map>
#include <mutex>
#include <tuple>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stingray {

GroupType parse_group_type(const std::string& s) {
    if (s == "L" || s == "SL" || s == "GL") return GroupType::L;
    if (s == "U" || s == "SU" || s == "GU") return GroupType::U;
    if (s == "Sp" || s == "S") return GroupType::Sp;
    if (s == "O+" || s == "Oplus") return GroupType::Oplus;
    if (s == "O-" || s == "Ominus") return GroupType::Ominus;
    if (s == "O" || s == "O0" || s == "Oo" || s == "Ocirc") return GroupType::Ocirc;
    throw std::invalid_argument("unknown group type '" + s + "'");
}

std::string type_name(GroupType t) {
    switch (t) {
        case GroupType::L: return "L";
        case GroupType::U: return "U";
        case GroupType::Sp: return "Sp";
        case GroupType::Oplus: return "O+";
        case GroupType::Ominus: return "O-";
        case GroupType::Ocirc: return "Ocirc";
    }
    return "?";
}

bool is_orthogonal(GroupType t) {
    return t == GroupType::Oplus || t == GroupType::Ominus || t == GroupType::Ocirc;
}

std::pair<unsigned, unsigned> prime_power(uint64_t q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power");
    auto f = factor_integer(BigInt(std::to_string(q)));
    if (f.size() != 1) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
    return {unsigned(f.begin()->first.get_ui()), f.begin()->second};
}

void check_parameters(GroupType t, size_t n, uint64_t q) {
    auto [p, a] = prime_power(q);
    (void)a;
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    if ((t == GroupType::Sp || t == GroupType::Oplus || t == GroupType::Ominus) && n % 2)
        throw std::invalid_argument(type_name(t) + " needs even dimension");
    if (t == GroupType::Ocirc && (n % 2 == 0 || p == 2 || n < 3))
        throw std::invalid_argument("Ocirc needs odd dimension >= 3 and odd q");
    uint64_t Q = t == GroupType::U ? q * q : q;
    if (Q > Field::kMaxOrder) throw std::invalid_argument("field too large");
}

BigInt group_order(GroupType t, size_t n, uint64_t q_in, bool omega) {
    check_parameters(t, n, q_in);
    BigInt q(std::to_string(q_in));
    BigInt o = 1;
    bool qodd = q_in % 2 == 1;
    switch (t) {
        case GroupType::L:
            o = pow_big(q, n * (n - 1) / 2);
            for (size_t i = 1; i <= n; ++i) o *= pow_big(q, i) - 1;
            if (omega) o /= q - 1;
            break;
        case GroupType::U:
            o = pow_big(q, n * (n - 1) / 2);
            for (size_t i = 1; i <= n; ++i) o *= pow_big(q, i) - (i % 2 ? -1 : 1);
            if (omega) o /= q + 1;
            break;
        case GroupType::Sp: {
            size_t m = n / 2;
            o = pow_big(q, m * m);
            for (size_t i = 1; i <= m; ++i) o *= pow_big(q, 2 * i) - 1;
            break;
        }
        case GroupType::Oplus:
        case GroupType::Ominus: {
            size_t m = n / 2;
            int eps = t == GroupType::Oplus ? 1 : -1;
            o = 2 * pow_big(q, m * (m - 1)) * (pow_big(q, m) - eps);
            for (size_t i = 1; i < m; ++i) o *= pow_big(q, 2 * i) - 1;
            if (omega) o /= qodd ? 4 : 2;
            break;
        }
        case GroupType::Ocirc: {
            size_t m = n / 2;
            o = 2 * pow_big(q, m * m);
            for (size_t i = 1; i <= m; ++i) o *= pow_big(q, 2 * i) - 1;
            if (omega) o /= 4;
            break;
        }
    }
    return o;
}

// ---------------------------------------------------------------- forms

Elem Form::B(const Vec& x, const Vec& y) const {
    const Field& K = *F;
    Elem s = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        Elem t = 0;
        const Elem* r = gram.row(i);
        for (size_t j = 0; j < n; ++j)
            if (r[j] && y[j]) t = K.add(t, K.mul(r[j], K.conj(y[j])));
        s = K.add(s, K.mul(x[i], t));
    }
    return s;
}

Elem Form::Q(const Vec& x) const {
    if (!orthogonal()) throw std::logic_error("Form::Q on a non-orthogonal form");
    const Field& K = *F;
    Elem s = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        Elem t = 0;
        for (size_t j = i; j < n; ++j)
            if (x[j] && quad(i, j)) t = K.add(t, K.mul(quad(i, j), x[j]));
        s = K.add(s, K.mul(x[i], t));
    }
    return s;
}

namespace {

Matrix polar_of(const Matrix& quad) {
    const Field& K = *quad.field();
    size_t n = quad.rows();
    Matrix G(quad.field(), n, n);
    for (size_t i = 0; i < n; ++i) {
        G(i, i) = K.add(quad(i, i), quad(i, i));
        for (size_t j = i + 1; j < n; ++j) G(i, j) = G(j, i) = quad(i, j);
    }
    return G;
}

// least nu with t^2 + t + nu irreducible over F
Elem anisotropic_nu(const FieldPtr& F) {
    for (Elem nu = 1; nu < F->size(); ++nu)
        if (is_irreducible(Poly(F, {nu, 1, 1}))) return nu;
    throw std::logic_error("no irreducible t^2+t+nu");
}

// the form used for building generators: hyperbolic pairs (2i, 2i+1),
// followed by the anisotropic part for O-, O and odd-dimensional U
Form construction_form(GroupType t, size_t n, const FieldPtr& F) {
    Form f;
    f.type = t;
    f.F = F;
    f.n = n;
    f.gram = Matrix(F, n, n);
    const Field& K = *F;
    if (t == GroupType::L) return f;
    if (t == GroupType::Sp || t == GroupType::U) {
        for (size_t i = 0; i + 1 < n; i += 2) {
            f.gram(i, i + 1) = 1;
            f.gram(i + 1, i) = t == GroupType::Sp ? K.neg(1) : 1;
        }
        if (n % 2) f.gram(n - 1, n - 1) = 1;
        return f;
    }
    f.quad = Matrix(F, n, n);
    size_t pairs = n / 2;
    if (t == GroupType::Ominus) --pairs;
    for (size_t i = 0; i < pairs; ++i) f.quad(2 * i, 2 * i + 1) = 1;
    if (t == GroupType::Ominus) {
        f.quad(n - 2, n - 2) = 1;
        f.quad(n - 2, n - 1) = 1;
        f.quad(n - 1, n - 1) = anisotropic_nu(F);
    }
    if (t == GroupType::Ocirc) f.quad(n - 1, n - 1) = 1;
    f.gram = polar_of(f.quad);
    return f;
}

// rows of P form an orthonormal basis for the hermitian form H
Matrix unitary_orthonormal_basis(const Form& H) {
    const FieldPtr& F = H.F;
    const Field& K = *F;
    size_t n = H.n;
    std::vector<Vec> W;
    for (size_t i = 0; i < n; ++i) {
        Vec e(n, 0);
        e[i] = 1;
        W.push_back(e);
    }
    std::vector<Vec> out;
    uint32_t q = K.q();
    while (!W.empty()) {
        Vec v;
        bool found = false;
        for (size_t i = 0; i < W.size() && !found; ++i)
            if (H.B(W[i], W[i])) {
                v = W[i];
                found = true;
            }
        for (size_t i = 0; i < W.size() && !found; ++i)
            for (size_t j = i + 1; j < W.size() && !found; ++j)
                for (Elem l = 1; l < K.size() && !found; ++l) {
                    Vec c = vec_add(K, W[i], vec_scale(K, W[j], l));
                    if (H.B(c, c)) {
                        v = c;
                        found = true;
                    }
                }
        if (!found) throw std::logic_error("hermitian form degenerate");
        // scale so that B(v,v) = 1; B(v,v) lies in GF(q)
        Elem b = H.B(v, v);
        uint32_t k = K.log(K.inv(b)) / (q + 1);
        v = vec_scale(K, v, K.exp(k));
        out.push_back(v);
        std::vector<Vec> W2;
        for (auto& w : W) {
            Vec x = vec_add(K, w, vec_scale(K, v, K.neg(H.B(w, v))));
            if (is_zero_vec(x)) continue;
            Matrix test = Matrix::from_rows(F, out);
            Matrix test2 = W2.empty() ? test : stack(test, Matrix::from_rows(F, W2));
            if (rank(stack(test2, Matrix::from_rows(F, {x}))) > test2.rows()) W2.push_back(x);
        }
        W = W2;
    }
    return Matrix::from_rows(F, out);
}

FieldPtr field_for(GroupType t, uint64_t q) {
    auto [p, a] = prime_power(q);
    return Field::create(p, a, field_u(t));
}

}  // namespace

Form standard_form(GroupType t, size_t n, uint64_t q) {
    check_parameters(t, n, q);
    FieldPtr F = field_for(t, q);
    if (t != GroupType::U) return construction_form(t, n, F);
    Form f;
    f.type = t;
    f.F = F;
    f.n = n;
    f.gram = Matrix::identity(F, n);
    return f;
}

Form restrict_form(const Form& f, const Subspace& U) {
    Form r;
    r.type = f.type;
    r.F = f.F;
    r.n = U.dim();
    const Matrix& Bm = U.basis();
    r.gram = Bm * f.gram * transpose(conjugate(Bm));
    if (f.orthogonal()) {
        r.quad = Matrix(f.F, r.n, r.n);
        for (size_t i = 0; i < r.n; ++i) {
            r.quad(i, i) = f.Q(Bm.row_vec(i));
            for (size_t j = i + 1; j < r.n; ++j) r.quad(i, j) = r.gram(i, j);
        }
    }
    return r;
}

std::string subspace_type_name(SubspaceType s) {
    switch (s) {
        case SubspaceType::Degenerate: return "degenerate";
        case SubspaceType::Nondegenerate: return "nondegenerate";
        case SubspaceType::Plus: return "nondegenerate_plus";
        case SubspaceType::Minus: return "nondegenerate_minus";
        case SubspaceType::Circ: return "nondegenerate_circ";
    }
    return "?";
}

namespace {

bool restricted_nondegenerate(const Form& r) {
    const Field& K = *r.F;
    Matrix rad = left_kernel(r.gram);
    if (rad.rows() == 0) return true;
    if (!r.orthogonal() || K.p() != 2) return false;
    // even q: the polar form of an odd-dimensional space has a 1-dim radical
    return r.n % 2 == 1 && rad.rows() == 1 && r.Q(rad.row_vec(0)) != 0;
}

// Arf invariant of a nondegenerate even-dimensional quadratic form, q even.
// Returns true for plus type.
bool arf_plus(const Form& r) {
    const Field& K = *r.F;
    std::vector<Vec> rest;
    for (size_t i = 0; i < r.n; ++i) {
        Vec e(r.n, 0);
        e[i] = 1;
        rest.push_back(e);
    }
    Elem arf = 0;
    while (!rest.empty()) {
        Vec a = rest[0], b;
        bool found = false;
        for (size_t j = 1; j < rest.size() && !found; ++j)
            if (r.B(a, rest[j])) {
                b = rest[j];
                found = true;
            }
        if (!found) throw std::logic_error("arf: degenerate form");
        b = vec_scale(K, b, K.inv(r.B(a, b)));  // B(a,b) = 1
        arf = K.add(arf, K.mul(r.Q(a), r.Q(b)));
        std::vector<Vec> next;
        for (size_t j = 1; j < rest.size(); ++j) {
            // project off the hyperbolic pair (alternating form: B(x,a) = B(a,x))
            Vec x = rest[j];
            Elem xa = r.B(x, a), xb = r.B(x, b);
            x = vec_add(K, x, vec_scale(K, b, xa));
            x = vec_add(K, x, vec_scale(K, a, xb));
            if (is_zero_vec(x)) continue;
            bool indep = true;
            if (!next.empty()) {
                Matrix m = Matrix::from_rows(r.F, next);
                indep = rank(stack(m, Matrix::from_rows(r.F, {x}))) > m.rows();
            }
            if (indep) next.push_back(x);
        }
        rest = next;
    }
    // plus iff arf lies in {t^2 + t}, iff its absolute trace vanishes
    Elem tr = 0, x = arf;
    for (unsigned i = 0; i < K.degree(); ++i) {
        tr = K.add(tr, x);
        x = K.mul(x, x);
    }
    return tr == 0;
}

}  // namespace

SubspaceType subspace_type(const Subspace& U, const Form& f) {
    if (!f.has_form()) throw std::invalid_argument("subspace_type: group of type L has no form");
    if (U.dim() == 0) throw std::invalid_argument("subspace_type: zero subspace");
    Form r = restrict_form(f, U);
    if (!restricted_nondegenerate(r)) return SubspaceType::Degenerate;
    if (!f.orthogonal()) return SubspaceType::Nondegenerate;
    if (r.n % 2) return SubspaceType::Circ;
    const Field& K = *f.F;
    BigInt pts = pow_big(BigInt(K.size()), r.n);
    if (pts <= (1 << 20)) return subspace_type_by_count(U, f);
    return structural_type(r);
}

SubspaceType structural_type(const Form& r) {
    const Field& K = *r.F;
    if (!r.orthogonal()) throw std::invalid_argument("structural_type: needs an orthogonal form");
    if (!restricted_nondegenerate(r)) return SubspaceType::Degenerate;
    if (r.n % 2) return SubspaceType::Circ;
    if (K.p() == 2) return arf_plus(r) ? SubspaceType::Plus : SubspaceType::Minus;
    // odd q: plus iff (-1)^m det is a square
    Elem disc = determinant(r.gram);
    if ((r.n / 2) % 2) disc = K.neg(disc);
    return K.is_square(disc) ? SubspaceType::Plus : SubspaceType::Minus;
}

SubspaceType subspace_type_by_count(const Subspace& U, const Form& f) {
    Form r = restrict_form(f, U);
    const Field& K = *f.F;
    size_t k = r.n;
    if (k % 2 || !f.orthogonal()) throw std::invalid_argument("count needs an even-dimensional orthogonal subspace");
    if (pow_big(BigInt(K.size()), k) > (1 << 20)) throw std::domain_error("subspace too large to count");
    if (!restricted_nondegenerate(r)) return SubspaceType::Degenerate;
    // odometer over coordinates; Q and B(x, u_j) updated incrementally
    std::vector<Elem> c(k, 0), bx(k, 0);
    std::vector<Elem> qd(k);
    for (size_t i = 0; i < k; ++i) qd[i] = r.quad(i, i);
    Elem Qx = 0;
    uint64_t singular = 0;
    const uint32_t Qs = K.size();
    auto change = [&](size_t i, Elem delta) {
        // Q(x + delta u_i) = Q(x) + delta^2 Q(u_i) + delta B(x, u_i)
        Qx = K.add(Qx, K.add(K.mul(K.mul(delta, delta), qd[i]), K.mul(delta, bx[i])));
        for (size_t j = 0; j < k; ++j)
            if (r.gram(i, j)) bx[j] = K.add(bx[j], K.mul(delta, r.gram(i, j)));
    };
    while (true) {
        size_t i = 0;
        while (i < k && c[i] == Qs - 1) {
            change(i, K.neg(c[i]));
            c[i] = 0;
            ++i;
        }
        if (i == k) break;
        Elem nc = c[i] + 1;
        change(i, K.sub(nc, c[i]));
        c[i] = nc;
        if (Qx == 0) ++singular;
    }
    uint64_t q = K.size(), m = k / 2;
    uint64_t qm = 1, qm1 = 1;
    for (uint64_t i = 0; i < m; ++i) qm *= q;
    qm1 = qm / q;
    if (singular == (qm1 + 1) * (qm - 1)) return SubspaceType::Plus;
    if (singular == (qm1 - 1) * (qm + 1)) return SubspaceType::Minus;
    throw std::logic_error("singular vector count matches neither type");
}

Subspace perp(const Subspace& U, const Form& f) {
    if (!f.has_form()) throw std::invalid_argument("perp: group of type L has no form");
    if (U.dim() == 0) return Subspace::full(f.F, f.n);
    return Subspace::span(left_kernel(f.gram * transpose(conjugate(U.basis()))));
}

bool preserves_form(const Matrix& g, const Form& f) {
    if (g.rows() != f.n || g.cols() != f.n) return false;
    if (!is_invertible(g)) return false;
    if (!f.has_form()) return true;
    if (g * f.gram * transpose(conjugate(g)) != f.gram) return false;
    if (f.orthogonal())
        for (size_t i = 0; i < f.n; ++i)
            if (f.Q(g.row_vec(i)) != f.quad(i, i)) return false;
    return true;
}

std::optional<Form> invariant_quadratic_form(const std::vector<Matrix>& gens, const Form& sp) {
    if (sp.type != GroupType::Sp) throw std::invalid_argument("invariant_quadratic_form: needs a symplectic form");
    const Field& K = *sp.F;
    if (K.p() != 2) throw std::invalid_argument("invariant_quadratic_form: q must be even");
    size_t n = sp.n;
    // unknowns c_k = Q(e_k); off-diagonal coefficients are fixed by the polar form
    std::vector<Vec> rows;
    for (auto& g : gens)
        for (size_t i = 0; i < n; ++i) {
            Vec row(n + 1, 0);
            for (size_t k = 0; k < n; ++k) row[k] = K.mul(g(i, k), g(i, k));
            row[i] = K.sub(row[i], 1);
            Elem rhs = 0;
            for (size_t k = 0; k < n; ++k)
                for (size_t l = k + 1; l < n; ++l)
                    if (sp.gram(k, l)) rhs = K.add(rhs, K.mul(sp.gram(k, l), K.mul(g(i, k), g(i, l))));
            row[n] = K.neg(rhs);
            rows.push_back(row);
        }
    Vec c(n, 0);
    if (!rows.empty()) {
        Matrix A = Matrix::from_rows(sp.F, rows);
        auto piv = rref_inplace(A);
        for (size_t r = 0; r < piv.size(); ++r) {
            if (piv[r] == n) return std::nullopt;  // inconsistent
            c[piv[r]] = A(r, n);
        }
    }
    Form f;
    f.F = sp.F;
    f.n = n;
    f.gram = sp.gram;
    f.quad = Matrix(sp.F, n, n);
    for (size_t k = 0; k < n; ++k) {
        f.quad(k, k) = c[k];
        for (size_t l = k + 1; l < n; ++l) f.quad(k, l) = sp.gram(k, l);
    }
    f.type = GroupType::Oplus;
    f.type = subspace_type(Subspace::full(sp.F, n), f) == SubspaceType::Plus ? GroupType::Oplus : GroupType::Ominus;
    return f;
}

// ---------------------------------------------------------------- generators

namespace {

Matrix outer(const Form& f, const Vec& x, const Vec& y) {
    // column G conj(x)^T times row y: the map v -> B(v, x) y
    const Field& K = *f.F;
    Matrix m(f.F, f.n, f.n);
    for (size_t i = 0; i < f.n; ++i) {
        Elem c = 0;
        for (size_t j = 0; j < f.n; ++j)
            if (f.gram(i, j) && x[j]) c = K.add(c, K.mul(f.gram(i, j), K.conj(x[j])));
        if (!c) continue;
        for (size_t j = 0; j < f.n; ++j) m(i, j) = K.mul(c, y[j]);
    }
    return m;
}

Vec random_vec(const Form& f, Rng& rng) {
    Vec v(f.n);
    for (auto& x : v) x = Elem(rng.below(f.F->size()));
    return v;
}

Vec random_nonzero(const Form& f, Rng& rng) {
    Vec v;
    do v = random_vec(f, rng);
    while (is_zero_vec(v));
    return v;
}

// x -> x + l B(x,v) v
Matrix transvection(const Form& f, const Vec& v, Elem l) {
    return Matrix::identity(f.F, f.n) + scale(outer(f, v, v), l);
}

// x -> x - B(x,a)/Q(a) a
Matrix reflection(const Form& f, const Vec& a) {
    const Field& K = *f.F;
    return Matrix::identity(f.F, f.n) + scale(outer(f, a, a), K.neg(K.inv(f.Q(a))));
}

// x -> x + (alpha-1) B(x,a)/B(a,a) a
Matrix quasi_reflection(const Form& f, const Vec& a, Elem alpha) {
    const Field& K = *f.F;
    return Matrix::identity(f.F, f.n) + scale(outer(f, a, a), K.div(K.sub(alpha, 1), f.B(a, a)));
}

// u singular, v in u-perp: x -> x + B(x,u) v - B(x,v) u - Q(v) B(x,u) u
Matrix siegel(const Form& f, const Vec& u, const Vec& v) {
    Matrix m = Matrix::identity(f.F, f.n) + outer(f, u, v);
    m = m - outer(f, v, u);
    return m - scale(outer(f, u, u), f.Q(v));
}

Elem random_nonzero_elem(const Field& K, Rng& rng) { return Elem(1 + rng.below(K.size() - 1)); }

// random element of a root-like family of the tail group
Matrix random_tail_element(const Form& f, bool omega, Rng& rng) {
    const Field& K = *f.F;
    switch (f.type) {
        case GroupType::Sp: return transvection(f, random_nonzero(f, rng), random_nonzero_elem(K, rng));
        case GroupType::U: {
            uint32_t q = K.q();
            bool transv = rng.below(2) == 0;
            if (transv) {
                Vec v;
                do v = random_nonzero(f, rng);
                while (f.B(v, v) != 0);
                Elem l;
                do l = random_nonzero_elem(K, rng);
                while (K.add(l, K.conj(l)) != 0);
                return transvection(f, v, l);
            }
            auto aniso = [&] {
                Vec a;
                do a = random_nonzero(f, rng);
                while (f.B(a, a) == 0);
                return a;
            };
            // alpha of norm 1, alpha != 1
            Elem alpha;
            do alpha = K.exp((q - 1) * rng.below(q + 1));
            while (alpha == 1);
            Matrix r = quasi_reflection(f, aniso(), alpha);
            if (omega) r = r * quasi_reflection(f, aniso(), K.inv(alpha));
            return r;
        }
        default: {
            bool sieg = f.n >= 3 && rng.below(2) == 0;
            if (sieg) {
                Vec u, v;
                do u = random_nonzero(f, rng);
                while (f.Q(u) != 0);
                do v = random_vec(f, rng);
                while (f.B(v, u) != 0);
                return siegel(f, u, v);
            }
            auto nonsing = [&] {
                Vec a;
                do a = random_nonzero(f, rng);
                while (f.Q(a) == 0);
                return a;
            };
            Vec a = nonsing();
            if (!omega) return reflection(f, a);
            Vec b;
            do b = nonsing();
            while (K.p() != 2 && !K.is_square(K.mul(f.Q(a), f.Q(b))));
            return reflection(f, a) * reflection(f, b);
        }
    }
}

Matrix embed_block(const Matrix& small, size_t n, size_t offset) {
    Matrix g = Matrix::identity(small.field(), n);
    for (size_t i = 0; i < small.rows(); ++i)
        for (size_t j = 0; j < small.cols(); ++j) g(offset + i, offset + j) = small(i, j);
    return g;
}

// generators of GL_k(F) (or SL_k when special)
std::vector<Matrix> gl_generators(const FieldPtr& F, size_t k, bool special) {
    const Field& K = *F;
    std::vector<Matrix> out;
    if (k == 0) return out;
    if (!special) {
        Matrix D = Matrix::identity(F, k);
        D(0, 0) = K.primitive();
        out.push_back(D);
    }
    if (k == 1) return out;
    for (unsigned j = 0; j < K.degree(); ++j) {
        Matrix X = Matrix::identity(F, k);
        X(0, 1) = K.exp(j);
        out.push_back(X);
    }
    Matrix C(F, k, k);
    for (size_t i = 0; i < k; ++i) C(i, (i + 1) % k) = 1;
    if (k % 2 == 0) C(k - 1, 0) = K.neg(1);  // determinant 1
    out.push_back(C);
    return out;
}

// A on the e-coordinates 0,2,..,2k-2 and its dual on the f-coordinates
Matrix levi_embed(const Matrix& A, size_t n, bool unitary) {
    Matrix Y = transpose(inverse(unitary ? conjugate(A) : A));
    Matrix g = Matrix::identity(A.field(), n);
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) {
            g(2 * i, 2 * j) = A(i, j);
            g(2 * i + 1, 2 * j + 1) = Y(i, j);
        }
    return g;
}

std::vector<Matrix> tail_generators(const Form& tf, uint64_t q, bool omega, uint64_t seed) {
    std::vector<Matrix> out;
    const Field& K = *tf.F;
    size_t t = tf.n;
    // one-dimensional unitary group: scalars of norm 1
    if (tf.type == GroupType::U && t == 1) {
        if (!omega) {
            Matrix z = Matrix::identity(tf.F, 1);
            z(0, 0) = K.exp(K.q() - 1);
            out.push_back(z);
        }
        return out;
    }
    BigInt target = group_order(tf.type, t, q, omega);
    Rng rng(seed);
    BigInt pts = pow_big(BigInt(K.size()), t);
    if (pts > MatrixBSGS::kMaxPoints) {
        // too large to verify here; a generous random set
        for (unsigned i = 0; i < 6 + 2 * K.degree(); ++i) out.push_back(random_tail_element(tf, omega, rng));
        return out;
    }
    for (int i = 0; i < 2; ++i) out.push_back(random_tail_element(tf, omega, rng));
    for (int attempt = 0; attempt < 400; ++attempt) {
        MatrixBSGS::Options opt;
        opt.stop_at = target;
        if (MatrixBSGS::build(out, tf.F, t, opt).order() == target) return out;
        out.push_back(random_tail_element(tf, omega, rng));
    }
    throw std::logic_error("tail generators did not reach the group order");
}

}  // namespace

namespace {

std::mutex g_tables_mu;
std::map<std::tuple<GroupType, size_t, uint64_t, std::string>, std::vector<Matrix>> g_tables;

ClassicalGroup builtin_group(GroupType t, size_t n, uint64_t q) {
    ClassicalGroup G;
    G.type = t;
    G.n = n;
    G.q = q;
    G.F = field_for(t, q);
    G.form = standard_form(t, n, q);
    const FieldPtr& F = G.F;
    if (t == GroupType::L) {
        G.gens = gl_generators(F, n, false);
        G.omega_gens = gl_generators(F, n, true);
        return G;
    }
    Form cf = construction_form(t, n, F);
    size_t tail = 2, levi = n / 2;
    switch (t) {
        case GroupType::Sp: tail = 2; break;
        case GroupType::Oplus: tail = n >= 4 ? 4 : 2; break;
        case GroupType::Ominus:
            tail = n >= 4 ? 4 : 2;
            levi = n / 2 - 1;
            break;
        case GroupType::Ocirc: tail = 3; break;
        case GroupType::U: tail = n % 2 ? (n >= 3 ? 3 : 1) : 2; break;
        default: break;
    }
    bool unitary = t == GroupType::U;
    uint64_t seed = 0x9e3779b97f4a7c15ULL ^ (uint64_t(t) << 56) ^ (uint64_t(n) << 32) ^ q;
    Form tf = construction_form(t, tail, F);
    auto build = [&](bool omega) {
        std::vector<Matrix> gs;
        bool special = omega && t != GroupType::Sp;
        for (auto& A : gl_generators(F, levi, special)) gs.push_back(levi_embed(A, n, unitary));
        for (auto& s : tail_generators(tf, q, omega, seed + omega)) gs.push_back(embed_block(s, n, n - tail));
        return gs;
    };
    G.gens = build(false);
    G.omega_gens = build(true);
    if (unitary) {
        // move to the identity Gram matrix
        Matrix P = unitary_orthonormal_basis(cf), Pi = inverse(P);
        for (auto* v : {&G.gens, &G.omega_gens})
            for (auto& g : *v) g = P * g * Pi;
    }
    return G;
}

}  // namespace

ClassicalGroup ClassicalGroup::create(GroupType t, size_t n, uint64_t q) {
    check_parameters(t, n, q);
    ClassicalGroup G = builtin_group(t, n, q);
    std::lock_guard<std::mutex> lk(g_tables_mu);
    if (g_tables.empty()) return G;
    for (auto* role : {"full", "omega"}) {
        auto it = g_tables.find({t, n, q, role});
        if (it == g_tables.end()) continue;
        std::vector<Matrix> mats;
        for (auto& m : it->second) {
            Matrix c(G.F, n, n);  // tables may come from another field object
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) c(i, j) = m(i, j);
            mats.push_back(c);
        }
        (std::string(role) == "full" ? G.gens : G.omega_gens) = mats;
    }
    return G;
}

void install_generator_tables(const std::vector<GeneratorTable>& tables) {
    for (auto& t : tables) {
        if (t.role != "full" && t.role != "omega") throw std::invalid_argument("generator role must be full or omega");
        Form f = standard_form(t.type, t.n, t.q);
        for (auto& m : t.mats) {
            if (!is_invertible(m)) throw std::invalid_argument("generator table: singular matrix for " + type_name(t.type));
            if (f.has_form() && !preserves_form(m, f))
                throw std::invalid_argument("generator table: matrix does not preserve the standard form of " + type_name(t.type));
            if (t.role == "omega" && !in_omega(m, f))
                throw std::invalid_argument("generator table: omega generator outside Omega for " + type_name(t.type));
        }
    }
    std::lock_guard<std::mutex> lk(g_tables_mu);
    for (auto& t : tables) g_tables[{t.type, t.n, t.q, t.role}] = t.mats;
}

void clear_generator_tables() {
    std::lock_guard<std::mutex> lk(g_tables_mu);
    g_tables.clear();
}

std::string ClassicalGroup::describe() const {
    std::ostringstream os;
    os << type_name(type) << "_" << n << "(" << q << ")";
    return os.str();
}

bool in_omega(const Matrix& g, const ClassicalGroup& G) { return in_omega(g, G.form); }

bool in_omega(const Matrix& g, const Form& f) {
    const Field& K = *f.F;
    const size_t n = f.n;
    switch (f.type) {
        case GroupType::L:
        case GroupType::U: return determinant(g) == 1;
        case GroupType::Sp: return true;
        default: break;
    }
    Matrix I = Matrix::identity(f.F, n);
    Matrix gm = g - I;
    if (K.p() == 2) return rank(gm) % 2 == 0;
    if (determinant(g) != 1) return false;
    // spinor norm: discriminant of the Wall form on the image of g - 1
    Matrix img = gm;
    auto piv = rref_inplace(img);
    size_t k = piv.size();
    if (k == 0) return true;
    Matrix U(f.F, k, n);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < n; ++j) U(i, j) = img(i, j);
    // preimages x_i with x_i (g - 1) = u_i: solve via the row space of (g-1)
    std::vector<Vec> pre;
    for (size_t i = 0; i < k; ++i) {
        // solve x * gm = u_i, i.e. gm^T x^T = u_i^T
        Matrix A(f.F, n, n + 1);
        for (size_t r = 0; r < n; ++r) {
            for (size_t c = 0; c < n; ++c) A(r, c) = gm(c, r);
            A(r, n) = U(i, r);
        }
        auto pv = rref_inplace(A);
        Vec x(n, 0);
        for (size_t r = 0; r < pv.size(); ++r) {
            if (pv[r] == n) throw std::logic_error("in_omega: image vector without preimage");
            x[pv[r]] = A(r, n);
        }
        pre.push_back(x);
    }
    Matrix W(f.F, k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) W(i, j) = f.B(U.row_vec(i), pre[j]);
    Elem disc = determinant(W);
    return disc != 0 && K.is_square(disc);
}

// ---------------------------------------------------------------- text tables

void write_generators(std::ostream& os, const ClassicalGroup& G) {
    os << "# stingray generator tables v1\n";
    for (int role = 0; role < 2; ++role) {
        const auto& mats = role ? G.omega_gens : G.gens;
        for (const auto& m : mats) {
            os << type_name(G.type) << " " << G.n << " " << G.q << " " << (role ? "omega" : "full") << "\n";
            for (size_t i = 0; i < m.rows(); ++i) {
                for (size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
                os << "\n";
            }
            os << "\n";
        }
    }
}

std::vector<GeneratorTable> read_generators(std::istream& is) {
    std::vector<GeneratorTable> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream hs(line);
        std::string tname, role;
        size_t n;
        uint64_t q;
        if (!(hs >> tname >> n >> q >> role)) throw std::invalid_argument("bad generator header: " + line);
        GroupType t = parse_group_type(tname);
        check_parameters(t, n, q);
        auto [p, a] = prime_power(q);
        FieldPtr F = Field::create(p, a, field_u(t));
        Matrix m(F, n, n);
        for (size_t i = 0; i < n; ++i) {
            if (!std::getline(is, line)) throw std::invalid_argument("truncated generator table");
            std::istringstream rs(line);
            for (size_t j = 0; j < n; ++j) {
                uint64_t v;
                if (!(rs >> v) || v >= F->size()) throw std::invalid_argument("bad matrix entry in row: " + line);
                m(i, j) = Elem(v);
            }
        }
        if (out.empty() || out.back().type != t || out.back().n != n || out.back().q != q || out.back().role != role)
            out.push_back(GeneratorTable{t, n, q, role, {}});
        out.back().mats.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------- sampler

Sampler::Sampler(const ClassicalGroup& G, Mode mode, uint64_t seed) : G_(&G), mode_(mode), rng_(seed) {
    const auto& gens = mode == Mode::Full ? G.gens : G.omega_gens;
    std::vector<Matrix> base;
    for (auto& g : gens)
        if (!g.is_identity()) base.push_back(g);
    if (base.empty()) base.push_back(Matrix::identity(G.F, G.n));
    size_t k = std::max<size_t>(kSlots, base.size());
    for (size_t i = 0; i < k; ++i) {
        slots_.push_back(base[i % base.size()]);
        inv_.push_back(inverse(slots_.back()));
    }
    acc_ = Matrix::identity(G.F, G.n);
    for (unsigned i = 0; i < kBurnIn; ++i) step();
}

void Sampler::step() {
    size_t n = slots_.size();
    size_t i = rng_.below(n), j = rng_.below(n - 1);
    if (j >= i) ++j;
    if (rng_.below(2)) {
        slots_[i] = slots_[i] * slots_[j];
        inv_[i] = inv_[j] * inv_[i];
    } else {
        slots_[i] = slots_[i] * inv_[j];
        inv_[i] = slots_[j] * inv_[i];
    }
    acc_ = acc_ * slots_[i];
    ++steps_;
}

Matrix Sampler::sample() {
    for (unsigned i = 0; i < kStepsPerSample; ++i) step();
    return acc_;
}

Matrix Sampler::sample_exact() {
    if (G_->type != GroupType::L) throw std::invalid_argument("exact sampling only for type L");
    const Field& K = *G_->F;
    size_t n = G_->n;
    Matrix g(G_->F, n, n);
    do {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) g(i, j) = Elem(rng_.below(K.size()));
    } while (!is_invertible(g));
    if (mode_ == Mode::Omega) {
        Elem s = K.inv(determinant(g));
        for (size_t j = 0; j < n; ++j) g(0, j) = K.mul(g(0, j), s);
    }
    return g;
}

}  // namespace stingray

#include "stingray/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#ifndef STINGRAY_ORACLE_VERSION
#define STINGRAY_ORACLE_VERSION "dev"
#endif

namespace stingray {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string str(const BigInt& x) { return x.get_str(); }

std::vector<std::pair<std::string, std::string>> std_params(GroupType X, size_t d, uint64_t q, size_t e) {
    return {{"X", type_name(X)}, {"d", std::to_string(d)}, {"q", std::to_string(q)}, {"e", std::to_string(e)}};
}

GroupType complement_type(GroupType X) {
    if (X == GroupType::Oplus) return GroupType::Ominus;
    if (X == GroupType::Ominus) return GroupType::Oplus;
    return X;
}

// isometry group of a member of U(d,q^u,e,X)
GroupType family_type(GroupType X) { return is_orthogonal(X) ? GroupType::Ominus : X; }

BigInt measured_order(GroupType t, size_t n, uint64_t q) {
    auto G = ClassicalGroup::create(t, n, q);
    MatrixBSGS::Options opt;
    opt.stop_at = G.order();
    return schreier_sims_order(G.gens, G.F, n, opt);
}

Subspace random_family_member(const ClassicalGroup& G, size_t e, uint64_t seed) {
    Rng rng(seed);
    const uint32_t Q = G.F->size();
    for (int t = 0; t < 100000; ++t) {
        Matrix M(G.F, e, G.n);
        for (size_t i = 0; i < e; ++i)
            for (size_t j = 0; j < G.n; ++j) M(i, j) = Elem(rng.below(Q));
        if (rank(M) != e) continue;
        Subspace U = Subspace::span(M);
        if (in_subspace_family(U, G.form, G.type)) return U;
    }
    throw std::runtime_error("no member of the subspace family found");
}

// trivial-intersection test without building the sum
bool meets_trivially(const Subspace& A, const Subspace& B) { return rank(stack(A.basis(), B.basis())) == A.dim() + B.dim(); }

Poly t_minus_one_power(FieldPtr F, size_t k) {
    Poly f = Poly::constant(F, 1);
    Poly lin(F, {F->neg(1), 1});
    for (size_t i = 0; i < k; ++i) f = poly_mul(f, lin);
    return f;
}

// determinant test for small square matrices over F
bool small_nonsingular(const Field& K, Elem (*a)[8], size_t m) {
    for (size_t c = 0; c < m; ++c) {
        size_t p = c;
        while (p < m && a[p][c] == 0) ++p;
        if (p == m) return false;
        if (p != c)
            for (size_t j = c; j < m; ++j) std::swap(a[p][j], a[c][j]);
        Elem inv = K.inv(a[c][c]);
        for (size_t r = c + 1; r < m; ++r) {
            if (a[r][c] == 0) continue;
            Elem f = K.neg(K.mul(a[r][c], inv));
            for (size_t j = c; j < m; ++j) a[r][j] = K.add(a[r][j], K.mul(f, a[c][j]));
        }
    }
    return true;
}

nlohmann::ordered_json to_json(const OracleResult& r) {
    nlohmann::ordered_json j;
    j["formula"] = r.formula;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    j["value"] = str(r.value);
    if (r.ratio) j["ratio"] = to_string(*r.ratio);
    j["enumerated"] = str(r.enumerated);
    j["expected_universe"] = str(r.expected_universe);
    j["method"] = r.method;
    j["seconds"] = r.seconds;
    nlohmann::ordered_json x = nlohmann::ordered_json::object();
    for (auto& [k, v] : r.extra) x[k] = v;
    j["extra"] = x;
    j["code_version"] = oracle_code_version();
    return j;
}

OracleResult from_json(const nlohmann::ordered_json& j) {
    OracleResult r;
    r.formula = j.at("formula").get<std::string>();
    for (auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, v.get<std::string>());
    r.value = BigInt(j.at("value").get<std::string>(), 10);
    if (j.contains("ratio")) r.ratio = Rat(j.at("ratio").get<std::string>(), 10);
    r.enumerated = BigInt(j.at("enumerated").get<std::string>(), 10);
    r.expected_universe = BigInt(j.at("expected_universe").get<std::string>(), 10);
    r.method = j.at("method").get<std::string>();
    r.seconds = j.at("seconds").get<double>();
    for (auto& [k, v] : j.at("extra").items()) r.extra.emplace_back(k, v.get<std::string>());
    return r;
}

std::string cache_key(const std::string& name, const std::vector<std::string>& args) {
    std::string k = name;
    for (auto& a : args) {
        k += "_";
        for (char c : a) k += std::isalnum(static_cast<unsigned char>(c)) ? c : (c == '+' ? 'p' : c == '-' ? 'm' : 'x');
    }
    return k + ".json";
}

}  // namespace

std::string oracle_code_version() { return STINGRAY_ORACLE_VERSION; }

void enumerate_subspaces(FieldPtr F, size_t d, size_t e, const std::function<void(const Matrix&)>& fn) {
    if (e > d) throw std::invalid_argument("enumerate_subspaces: e > d");
    const uint32_t Q = F->size();
    if (gaussian_binomial(unsigned(d), unsigned(e), Q) > kSubspaceGuard)
        throw GuardError("enumerate_subspaces: Gaussian binomial exceeds the 10^7 guard");
    if (e == 0) {
        fn(Matrix(F, 0, d));
        return;
    }
    std::vector<size_t> piv(e);
    std::iota(piv.begin(), piv.end(), 0);
    while (true) {
        std::vector<char> is_piv(d, 0);
        for (size_t p : piv) is_piv[p] = 1;
        std::vector<std::pair<size_t, size_t>> free;
        for (size_t i = 0; i < e; ++i)
            for (size_t j = piv[i] + 1; j < d; ++j)
                if (!is_piv[j]) free.emplace_back(i, j);
        Matrix M(F, e, d);
        for (size_t i = 0; i < e; ++i) M(i, piv[i]) = 1;
        std::vector<uint32_t> digit(free.size(), 0);
        while (true) {
            fn(M);
            size_t k = 0;
            while (k < free.size()) {
                auto [i, j] = free[k];
                if (++digit[k] < Q) {
                    M(i, j) = digit[k];
                    break;
                }
                digit[k] = 0;
                M(i, j) = 0;
                ++k;
            }
            if (k == free.size()) break;
        }
        // next pivot combination
        size_t i = e;
        while (i > 0 && piv[i - 1] == d - e + i - 1) --i;
        if (i == 0) break;
        ++piv[i - 1];
        for (size_t k = i; k < e; ++k) piv[k] = piv[k - 1] + 1;
    }
}

BigInt count_subspaces(FieldPtr F, size_t d, size_t e) {
    BigInt n = 0;
    enumerate_subspaces(F, d, e, [&](const Matrix&) { ++n; });
    return n;
}

bool in_subspace_family(const Subspace& U, const Form& f, GroupType X) {
    if (X == GroupType::L) return true;
    if (U.dim() == 0) return false;
    SubspaceType t = subspace_type(U, f);
    if (is_orthogonal(X)) return t == SubspaceType::Minus;
    return t != SubspaceType::Degenerate;
}

OracleResult count_nondegenerate(GroupType X, size_t d, uint64_t q, size_t e, std::optional<SubspaceType> filter) {
    auto t0 = Clock::now();
    if (e == 0 || e > d) throw std::invalid_argument("count_nondegenerate: need 1 <= e <= d");
    Form f = standard_form(X, d, q);
    OracleResult r;
    r.formula = "num_subspaces";
    r.params = std_params(X, d, q, e);
    r.expected_universe = gaussian_binomial(unsigned(d), unsigned(e), f.F->size());
    enumerate_subspaces(f.F, d, e, [&](const Matrix& B) {
        ++r.enumerated;
        Subspace U = Subspace::span(B);
        bool hit;
        if (filter) hit = X != GroupType::L && subspace_type(U, f) == *filter;
        else hit = in_subspace_family(U, f, X);
        if (hit) ++r.value;
    });
    if (filter) r.extra.emplace_back("filter", subspace_type_name(*filter));
    r.method = "enumeration";
    r.seconds = since(t0);
    return r;
}

OracleResult oracle_num_subspaces(GroupType X, size_t d, uint64_t q, size_t e) {
    check_count_params(X, unsigned(d), q, unsigned(e));
    FieldPtr F = standard_form(X, d, q).F;
    if (gaussian_binomial(unsigned(d), unsigned(e), F->size()) <= kSubspaceGuard) return count_nondegenerate(X, d, q, e);
    if (X == GroupType::L) throw GuardError("num_subspaces oracle: beyond the enumeration guard");
    // transitive action on the family: |G| / |GX(U) x GX(U^perp)|
    auto t0 = Clock::now();
    OracleResult r;
    r.formula = "num_subspaces";
    r.params = std_params(X, d, q, e);
    BigInt G = measured_order(X, d, q);
    BigInt s1 = measured_order(family_type(X), e, q);
    BigInt s2 = measured_order(complement_type(X), d - e, q);
    if (G % (s1 * s2) != 0) throw std::logic_error("stabilizer order does not divide the group order");
    r.value = G / (s1 * s2);
    r.method = "orbit-stabilizer";
    r.extra = {{"group_order", str(G)}, {"stabilizer_order", str(s1 * s2)}};
    r.seconds = since(t0);
    return r;
}

OracleResult count_complement_pairs(GroupType X, size_t d, uint64_t q, size_t e) {
    auto t0 = Clock::now();
    check_count_params(X, unsigned(d), q, unsigned(e));
    auto G = ClassicalGroup::create(X, d, q);
    const Field& K = *G.F;
    const uint32_t Q = K.size();
    size_t m = d - e;
    OracleResult r;
    r.formula = "complement_pairs";
    r.params = std_params(X, d, q, e);
    BigInt n1 = oracle_num_subspaces(X, d, q, e).value;
    BigInt n2 = oracle_num_subspaces(X, d, q, m).value;
    r.extra = {{"U_e", str(n1)}, {"U_d-e", str(n2)}};

    bool small = gaussian_binomial(unsigned(d), unsigned(e), Q) <= kSubspaceGuard &&
                 gaussian_binomial(unsigned(d), unsigned(m), Q) <= kSubspaceGuard && n1 * n2 <= kPairGuard;
    if (small) {
        std::vector<Subspace> A, B;
        enumerate_subspaces(G.F, d, e, [&](const Matrix& M) {
            Subspace U = Subspace::span(M);
            if (in_subspace_family(U, G.form, X)) A.push_back(std::move(U));
        });
        enumerate_subspaces(G.F, d, m, [&](const Matrix& M) {
            Subspace U = Subspace::span(M);
            if (in_subspace_family(U, G.form, X)) B.push_back(std::move(U));
        });
        for (auto& U : A)
            for (auto& W : B) {
                ++r.enumerated;
                if (meets_trivially(U, W)) ++r.value;
            }
        r.expected_universe = n1 * n2;
        r.method = "double-loop";
    } else {
        // complements of one fixed U0 are graphs of Hom(W, U0); G is transitive on the family
        Subspace U0 = random_family_member(G, e, 0x5eed + d * 131 + e);
        Matrix Wb;
        if (X == GroupType::L) {
            Matrix P = adapted_basis(U0);
            Wb = Matrix(G.F, m, d);
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < d; ++j) Wb(i, j) = P(e + i, j);
        } else {
            Wb = perp(U0, G.form).basis();
        }
        BigInt total = pow_big(BigInt(Q), e * m);
        if (total > kGraphGuard) throw GuardError("complement_pairs: too many complements to enumerate");
        uint64_t NU = 1;
        for (size_t i = 0; i < e; ++i) NU *= Q;
        std::vector<Vec> uvec(NU);
        for (uint64_t a = 0; a < NU; ++a) {
            Vec v(d, 0);
            uint64_t x = a;
            for (size_t j = 0; j < e; ++j, x /= Q) v = vec_add(K, v, vec_scale(K, U0.basis().row_vec(j), Elem(x % Q)));
            uvec[a] = std::move(v);
        }
        std::vector<uint64_t> idx(m, 0);
        BigInt hits = 0;
        uint64_t count = 0;
        bool fast = (X == GroupType::Sp || X == GroupType::U) && m <= 8;
        if (fast) {
            // Gram of the graph = Gram(W) + Gram(phi rows), since W is orthogonal to U0
            // tabulate B on U0 when that is cheap, else evaluate on the fly
            bool table = NU * NU <= (1ull << 24);
            std::vector<Elem> T(table ? NU * NU : 0);
            if (table)
                for (uint64_t a = 0; a < NU; ++a)
                    for (uint64_t b = 0; b < NU; ++b) T[a * NU + b] = G.form.B(uvec[a], uvec[b]);
            auto Bu = [&](uint64_t x, uint64_t y) { return table ? T[x * NU + y] : G.form.B(uvec[x], uvec[y]); };
            Elem GW[8][8];
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < m; ++j) GW[i][j] = G.form.B(Wb.row_vec(i), Wb.row_vec(j));
            uint64_t h = 0;
            Elem a[8][8];
            while (true) {
                for (size_t i = 0; i < m; ++i)
                    for (size_t j = 0; j < m; ++j) a[i][j] = K.add(GW[i][j], Bu(idx[i], idx[j]));
                if (small_nonsingular(K, a, m)) ++h;
                ++count;
                size_t k = 0;
                while (k < m && ++idx[k] == NU) idx[k++] = 0;
                if (k == m) break;
            }
            hits = BigInt(std::to_string(h), 10);
        } else {
            Matrix M(G.F, m, d);
            while (true) {
                for (size_t i = 0; i < m; ++i) {
                    Vec row = vec_add(K, Wb.row_vec(i), uvec[idx[i]]);
                    for (size_t j = 0; j < d; ++j) M(i, j) = row[j];
                }
                Subspace W = Subspace::span(M);
                if (W.dim() == m && in_subspace_family(W, G.form, X)) ++hits;
                ++count;
                size_t k = 0;
                while (k < m && ++idx[k] == NU) idx[k++] = 0;
                if (k == m) break;
            }
        }
        r.enumerated = BigInt(std::to_string(count), 10);
        r.expected_universe = total;
        r.value = n1 * hits;
        r.extra.emplace_back("complements_of_fixed_U", str(hits));
        r.method = fast ? "graph-enumeration-gram" : "graph-enumeration";
    }
    r.ratio = Rat(r.value) / Rat(n1 * n2);
    r.ratio->canonicalize();
    r.seconds = since(t0);
    return r;
}

void for_each_group_element(const std::vector<Matrix>& gens, FieldPtr F, size_t d, const BigInt& order,
                            const std::function<void(const Matrix&)>& fn) {
    if (order > kElementGuard) throw GuardError("element scan: group order exceeds the 2*10^6 guard");
    MatrixBSGS::Options opt;
    opt.stop_at = order;
    auto B = MatrixBSGS::build(gens, F, d, opt);
    if (B.order() != order) throw std::runtime_error("element scan: generators do not reach the expected order");
    B.for_each_element(fn);
}

BigInt exhaustive_centralizer(const ClassicalGroup& G, const Matrix& g) {
    BigInt n = 0;
    for_each_group_element(G.gens, G.F, G.n, G.order(), [&](const Matrix& x) {
        if (x * g == g * x) ++n;
    });
    return n;
}

BigInt exhaustive_class_count(const ClassicalGroup& G, const Subspace& U, const Subspace& F, unsigned e,
                              const std::optional<Poly>& cls) {
    if (U.dim() != e) throw std::invalid_argument("exhaustive_class_count: dim U != e");
    BigInt n = 0;
    for_each_group_element(G.gens, G.F, G.n, G.order(), [&](const Matrix& x) {
        if (rank(x - Matrix::identity(G.F, G.n)) != e) return;
        auto c = classify_stingray(x, G);
        if (!c || c->e != e || c->U != U || c->F != F) return;
        if (cls && c->factor != *cls) return;
        ++n;
    });
    return n;
}

std::vector<Matrix> commutant_basis(const Matrix& g) {
    const Field& K = *g.field();
    size_t d = g.rows();
    // unknown X_ab at row a*d+b; equation (XA - AX)_ij at column i*d+j
    Matrix M(g.field(), d * d, d * d);
    for (size_t a = 0; a < d; ++a)
        for (size_t b = 0; b < d; ++b)
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) {
                    Elem c = 0;
                    if (a == i) c = K.add(c, g(b, j));
                    if (b == j) c = K.sub(c, g(i, a));
                    M(a * d + b, i * d + j) = c;
                }
    Matrix Kb = left_kernel(M);
    std::vector<Matrix> out;
    for (size_t r = 0; r < Kb.rows(); ++r) {
        Matrix X(g.field(), d, d);
        for (size_t a = 0; a < d; ++a)
            for (size_t b = 0; b < d; ++b) X(a, b) = Kb(r, a * d + b);
        out.push_back(std::move(X));
    }
    return out;
}

namespace {

// invertible elements of the commutant of g preserving f (all invertible ones for L)
BigInt commutant_isometries(const Matrix& g, const Form& f, GroupType X) {
    auto basis = commutant_basis(g);
    const Field& K = *g.field();
    const uint32_t Q = K.size();
    BigInt total = pow_big(BigInt(Q), basis.size());
    if (total > kCommutantGuard) throw GuardError("commutant too large to enumerate");
    size_t d = g.rows(), k = basis.size();
    std::vector<uint32_t> c(k, 0);
    BigInt n = 0;
    while (true) {
        Matrix x(g.field(), d, d);
        for (size_t i = 0; i < k; ++i)
            if (c[i])
                for (size_t a = 0; a < d; ++a)
                    for (size_t b = 0; b < d; ++b) x(a, b) = K.add(x(a, b), K.mul(c[i], basis[i](a, b)));
        if (is_invertible(x) && (X == GroupType::L || preserves_form(x, f))) ++n;
        size_t j = 0;
        while (j < k && ++c[j] == Q) c[j++] = 0;
        if (j == k) break;
    }
    return n;
}

StingrayCertificate constructed_gl_stingray(const ClassicalGroup& G, unsigned e) {
    const Field& K = *G.F;
    const uint32_t Q = K.size();
    uint64_t N = 1;
    for (unsigned i = 0; i < e; ++i) N *= Q;
    for (uint64_t code = 0; code < N; ++code) {
        std::vector<Elem> c(e + 1);
        uint64_t x = code;
        for (unsigned i = 0; i < e; ++i, x /= Q) c[i] = Elem(x % Q);
        c[e] = 1;
        if (c[0] == 0) continue;
        Poly f(G.F, c);
        if (!is_irreducible(f)) continue;
        Matrix g = companion(f);
        if (G.n > e) g = block_diag(g, Matrix::identity(G.F, G.n - e));
        if (auto s = classify_stingray(g, G)) return *s;
    }
    throw std::runtime_error("no GL stingray element of this degree");
}

}  // namespace

StingrayCertificate reference_stingray(const ClassicalGroup& G, unsigned e, uint64_t seed) {
    if (e == 0 || e > G.n) throw std::invalid_argument("reference_stingray: need 1 <= e <= n");
    if (stingray_primes(G.type, G.q, e).empty()) throw std::invalid_argument("reference_stingray: no stingray elements for this e");
    if (G.type == GroupType::L) return constructed_gl_stingray(G, e);
    if (e < 2) throw std::invalid_argument("reference_stingray: e must be at least 2");
    Sampler S(G, Sampler::Mode::Full, seed);
    for (int i = 0; i < 50000; ++i)
        if (auto c = stingray_scan(S.sample(), G, e, e)) return *c;
    throw std::runtime_error("reference_stingray: none found");
}

OracleResult oracle_class_size_per_subspace(GroupType X, uint64_t q, unsigned e) {
    auto t0 = Clock::now();
    auto Ge = ClassicalGroup::create(family_type(X), e, q);
    auto h = reference_stingray(Ge, e);
    OracleResult r;
    r.formula = "class_size_per_subspace";
    r.params = {{"X", type_name(X)}, {"q", std::to_string(q)}, {"e", std::to_string(e)}};
    r.extra = {{"class", h.factor.to_string()}};
    if (Ge.order() <= kElementGuard) {
        for_each_group_element(Ge.gens, Ge.F, e, Ge.order(), [&](const Matrix& x) {
            ++r.enumerated;
            if (charpoly(x) == h.factor) ++r.value;
        });
        r.expected_universe = Ge.order();
        r.method = "element-scan";
    } else {
        BigInt G = measured_order(family_type(X), e, q);
        BigInt C = commutant_isometries(h.element, Ge.form, Ge.type);
        r.value = G / C;
        r.enumerated = pow_big(BigInt(Ge.F->size()), e);
        r.method = "orbit-stabilizer";
        r.extra.emplace_back("group_order", str(G));
        r.extra.emplace_back("centralizer", str(C));
    }
    r.seconds = since(t0);
    return r;
}

OracleResult oracle_centralizer_order(GroupType X, size_t d, uint64_t q, unsigned e) {
    auto t0 = Clock::now();
    auto G = ClassicalGroup::create(X, d, q);
    auto g = reference_stingray(G, e);
    OracleResult r;
    r.formula = "centralizer_order";
    r.params = std_params(X, d, q, e);
    const uint32_t Q = G.F->size();
    size_t cdim = e + (d - e) * (d - e);
    if (G.order() <= kElementGuard) {
        r.value = exhaustive_centralizer(G, g.element);
        r.enumerated = G.order();
        r.expected_universe = G.order();
        r.method = "element-scan";
    } else if (pow_big(BigInt(Q), cdim) <= kCommutantGuard) {
        r.value = commutant_isometries(g.element, G.form, X);
        r.enumerated = pow_big(BigInt(Q), commutant_basis(g.element).size());
        r.expected_universe = pow_big(BigInt(Q), cdim);
        r.method = "commutant";
    } else {
        // x commuting with g preserves U and F; U and F are orthogonal for X != L
        Matrix h = restrict(g.element, g.U);
        Form fu = restrict_form(G.form, g.U);
        BigInt cu = commutant_isometries(h, fu, X);
        GroupType tf = X;
        if (is_orthogonal(X)) {
            auto st = subspace_type(g.F, G.form);
            tf = st == SubspaceType::Plus ? GroupType::Oplus : GroupType::Ominus;
        }
        BigInt cf = measured_order(tf, d - e, q);
        r.value = cu * cf;
        r.enumerated = pow_big(BigInt(Q), e);
        r.method = "commutant-decomposed";
        r.extra = {{"on_U", str(cu)}, {"on_F", str(cf)}};
    }
    r.seconds = since(t0);
    return r;
}

OracleResult oracle_duo_partner_count(GroupType X, size_t d, uint64_t q, unsigned e1) {
    auto t0 = Clock::now();
    unsigned e2 = unsigned(d) - e1;
    auto G = ClassicalGroup::create(X, d, q);
    auto g1 = reference_stingray(G, e1, 1);
    auto h2 = reference_stingray(G, e2, 2);
    OracleResult r;
    r.formula = "duo_partner_count";
    r.params = std_params(X, d, q, e1);
    Poly target = poly_mul(h2.factor, t_minus_one_power(G.F, d - e2));
    if (G.order() <= kElementGuard) {
        Matrix I = Matrix::identity(G.F, d);
        for_each_group_element(G.gens, G.F, d, G.order(), [&](const Matrix& x) {
            ++r.enumerated;
            if (charpoly(x) != target) return;
            Matrix y = x - I;
            if (rank(y) != e2) return;
            Subspace U2 = Subspace::span(y);  // image of x - 1 is the moved space
            if (meets_trivially(U2, g1.U)) ++r.value;
        });
        r.expected_universe = G.order();
        r.method = "element-scan";
    } else {
        // partners: U' in U(e2) meeting U1 trivially, F' a complement (L) or U'^perp, then c(e2)
        BigInt a = 0;
        Subspace Ufix;
        enumerate_subspaces(G.F, d, e2, [&](const Matrix& M) {
            ++r.enumerated;
            Subspace W = Subspace::span(M);
            if (!meets_trivially(W, g1.U) || !in_subspace_family(W, G.form, X)) return;
            if (a == 0) Ufix = W;
            ++a;
        });
        BigInt b = 1;
        if (X == GroupType::L) {
            b = 0;
            enumerate_subspaces(G.F, d, e1, [&](const Matrix& M) {
                if (meets_trivially(Subspace::span(M), Ufix)) ++b;
            });
        }
        BigInt c = oracle_class_size_per_subspace(X, q, e2).value;
        r.value = a * b * c;
        r.expected_universe = gaussian_binomial(unsigned(d), e2, G.F->size());
        r.method = "subspace-count";
        r.extra = {{"moved_spaces", str(a)}, {"fixed_spaces_each", str(b)}, {"class_size_per_subspace", str(c)}};
    }
    r.seconds = since(t0);
    return r;
}

ExhaustiveRho exhaustive_rho_gen(const ClassicalGroup& G, unsigned e1, unsigned e2, uint64_t seed) {
    if (G.order() > kElementGuard) throw GuardError("exhaustive_rho_gen: group order exceeds the 2*10^6 guard");
    if (pow_big(BigInt(G.F->size()), G.n) > BigInt(1u << 20)) throw GuardError("exhaustive_rho_gen: beyond the recognition guard");
    if (e2 > e1) std::swap(e1, e2);
    auto g1 = reference_stingray(G, e1, seed);
    auto h2 = reference_stingray(G, e2, seed + 1);
    Poly target = poly_mul(h2.factor, t_minus_one_power(G.F, G.n - e2));
    Matrix I = Matrix::identity(G.F, G.n);
    ExhaustiveRho out;
    std::map<std::string, BigInt> tally;
    for_each_group_element(G.gens, G.F, G.n, G.order(), [&](const Matrix& x) {
        if (charpoly(x) != target || rank(x - I) != e2) return;
        auto c2 = classify_stingray(x, G);
        if (!c2) return;
        auto D = form_duo(g1, *c2, G);
        if (!D) return;
        ++out.duos;
        Verdict v = generation_verdict(*D, G, seed);
        tally[v.name()] += 1;
        if (v.generating()) ++out.generating;
        else if (v.tag == VerdictTag::ProperSubgroup) {
            ++out.proper;
            bool not_perp = G.type != GroupType::L && D->d == G.n && D->cert2.U != perp(D->cert1.U, G.form);
            if (not_perp) ++out.proper_not_perp;
            if (!v.irreducible) {
                ++out.reducible;
                if (not_perp) ++out.reducible_not_perp;
            }
        } else {
            ++out.unverified;
        }
    });
    if (out.duos == 0) throw std::runtime_error("exhaustive_rho_gen: no duos");
    out.rho_gen = Rat(out.generating) / Rat(out.duos);
    out.rho_gen.canonicalize();
    out.rho_nongen = Rat(out.duos - out.generating) / Rat(out.duos);
    out.rho_nongen.canonicalize();
    for (auto& [k, v] : tally) out.by_verdict.emplace_back(k, v);
    return out;
}

ConjugateCount conjugate_count_identity(const ClassicalGroup& G, const StingrayCertificate& g) {
    if (G.type != GroupType::L) throw std::invalid_argument("conjugate_count_identity: GL only");
    const Subspace &U = g.U, &F = g.F;
    size_t e = U.dim(), d = G.n;
    ConjugateCount out;
    out.centralizer_G = exhaustive_centralizer(G, g.element);
    const Matrix& s = g.element;
    for_each_group_element(G.gens, G.F, d, G.order(), [&](const Matrix& x) {
        Subspace Ux = image(U, x), Fx = image(F, x);
        bool in_M = (Ux == U && Fx == F) || (Ux == F && Fx == U);
        if (!in_M) return;
        ++out.M_order;
        if (x * s == s * x) ++out.centralizer_M;
    });
    // M^x is the stabilizer of {Ux, Fx}; count the pairs g stabilizes
    std::vector<Subspace> A, B;
    enumerate_subspaces(G.F, d, e, [&](const Matrix& M) { A.push_back(Subspace::span(M)); });
    if (d - e != e) enumerate_subspaces(G.F, d, d - e, [&](const Matrix& M) { B.push_back(Subspace::span(M)); });
    const auto& Bs = d - e == e ? A : B;
    BigInt pairs = 0;
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = (d - e == e ? i + 1 : 0); j < Bs.size(); ++j) {
            if (!meets_trivially(A[i], Bs[j])) continue;
            ++pairs;
            Subspace a = image(A[i], s), b = image(Bs[j], s);
            if ((a == A[i] && b == Bs[j]) || (a == Bs[j] && b == A[i])) ++out.conjugates_containing;
        }
    if (pairs * out.M_order != G.order()) throw std::logic_error("conjugate_count_identity: |M^G| != |G:M|");
    return out;
}

std::vector<GridRow> oracle_grid(size_t max_d, const std::vector<uint64_t>& qs, const std::string& cache_dir,
                                 const std::function<void(const GridRow&)>& progress) {
    std::vector<GridRow> rows;
    auto emit = [&](GridRow row) {
        if (progress) progress(row);
        rows.push_back(std::move(row));
    };
    const GroupType types[] = {GroupType::L, GroupType::U, GroupType::Sp, GroupType::Oplus, GroupType::Ominus};
    for (GroupType X : types)
        for (uint64_t q : qs)
            for (size_t d = 2; d <= max_d; ++d) {
                if (X != GroupType::L && d % 2) continue;
                if (is_orthogonal(X) && d < 4) continue;
                const BigInt Q = X == GroupType::U ? BigInt(q * q) : BigInt(q);
                auto sd = std::to_string(d), sq = std::to_string(q), sx = type_name(X);
                for (unsigned e = 1; e < d; ++e) {
                    if (!parity_ok(X, e) || !parity_ok(X, unsigned(d) - e)) continue;
                    auto se = std::to_string(e);
                    auto base = [&](const std::string& what) {
                        GridRow g;
                        g.quantity = what;
                        g.type = X;
                        g.d = d;
                        g.q = q;
                        g.e = e;
                        return g;
                    };
                    {
                        auto o = evaluate_oracle("num_subspaces", {sd, sq, se, sx}, cache_dir);
                        GridRow g = base("num_subspaces");
                        BigInt f = num_subspaces(unsigned(d), q, e, X);
                        g.formula_value = str(f);
                        g.oracle_value = str(o.value);
                        g.method = o.method;
                        g.ok = f == o.value;
                        emit(g);
                    }
                    if (X != GroupType::L) {
                        auto o = evaluate_oracle("complement_pairs", {sd, sq, se, sx}, cache_dir);
                        GridRow g = base("k");
                        Rat lo = 1 - Rat(3) / Rat(2 * Q);
                        lo.canonicalize();
                        g.oracle_value = to_string(*o.ratio);
                        g.method = o.method;
                        if (X == GroupType::U && q == 2 && d == 2) {
                            // the one documented exception to the lower bound
                            g.formula_value = "exempt (U,1,1,2): (0,1)";
                            g.ok = *o.ratio > 0 && *o.ratio < 1;
                        } else {
                            g.formula_value = "[" + to_string(lo) + ",1)";
                            g.ok = *o.ratio >= lo && *o.ratio < 1;
                        }
                        emit(g);
                    }
                    if (e < 2 || stingray_primes(X, q, e).empty()) continue;
                    {
                        auto o = evaluate_oracle("class_size_per_subspace", {sd, sq, se, sx}, cache_dir);
                        GridRow g = base("class_size_per_subspace");
                        BigInt f = class_size_per_subspace(unsigned(d), q, e, X);
                        g.formula_value = str(f);
                        g.oracle_value = str(o.value);
                        g.method = o.method;
                        g.ok = f == o.value;
                        emit(g);
                    }
                    {
                        auto o = evaluate_oracle("centralizer_order", {sd, sq, se, sx}, cache_dir);
                        GridRow g = base("centralizer_order");
                        BigInt f = centralizer_order(unsigned(d), q, e, X);
                        g.formula_value = str(f);
                        g.oracle_value = str(o.value);
                        g.method = o.method;
                        g.ok = f == o.value;
                        emit(g);
                    }
                    unsigned e2 = unsigned(d) - e;
                    if ((X == GroupType::L || X == GroupType::Sp) && e2 >= 2 && e2 <= e && !stingray_primes(X, q, e2).empty()) {
                        auto o = evaluate_oracle("duo_partner_count", {sd, sq, se, sx}, cache_dir);
                        GridRow g = base("duo_partner_count");
                        BigInt f;
                        bool in_bounds = true;
                        if (X == GroupType::L) {
                            f = *duo_partner_count(unsigned(d), q, e, X).exact;
                        } else {
                            // no closed form: N = k |U(e2)| c(e2) with k measured by the pair oracle
                            auto k = evaluate_oracle("complement_pairs", {sd, sq, se, sx}, cache_dir);
                            f = duo_partner_count_given_k(unsigned(d), q, e, X, *k.ratio);
                            auto pc = duo_partner_count(unsigned(d), q, e, X);
                            in_bounds = Rat(o.value) >= pc.lower && Rat(o.value) < pc.upper;
                        }
                        g.formula_value = str(f);
                        g.oracle_value = str(o.value);
                        g.method = o.method;
                        g.ok = f == o.value && in_bounds;
                        emit(g);
                    }
                }
            }
    return rows;
}

std::vector<std::string> oracle_names() {
    return {"subspaces", "num_subspaces", "count_nondegenerate", "complement_pairs", "class_size_per_subspace",
            "centralizer_order", "duo_partner_count", "rho_gen"};
}

OracleResult evaluate_oracle(const std::string& name, const std::vector<std::string>& args, const std::string& cache_dir) {
    auto need = [&](size_t n, const char* usage) {
        if (args.size() != n) throw std::invalid_argument("oracle " + name + " expects " + usage);
    };
    auto num = [&](const std::string& s) -> uint64_t {
        size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &pos);
        } catch (...) {
            pos = 0;
        }
        if (pos != s.size() || s.empty()) throw std::invalid_argument("not a nonnegative integer: " + s);
        return v;
    };
    std::filesystem::path cache_file;
    if (!cache_dir.empty()) {
        cache_file = std::filesystem::path(cache_dir) / cache_key(name, args);
        std::ifstream in(cache_file);
        if (in) {
            try {
                auto j = nlohmann::ordered_json::parse(in);
                if (j.value("code_version", "") == oracle_code_version()) return from_json(j);
            } catch (const std::exception&) {
                // unreadable cache entries are recomputed
            }
        }
    }
    OracleResult r;
    if (name == "subspaces") {
        need(3, "d q e");
        auto [p, a] = prime_power(num(args[1]));
        auto t0 = Clock::now();
        FieldPtr F = Field::create(p, a);
        r.formula = name;
        r.params = {{"d", args[0]}, {"q", args[1]}, {"e", args[2]}};
        r.value = count_subspaces(F, num(args[0]), num(args[2]));
        r.enumerated = r.value;
        r.expected_universe = gaussian_binomial(unsigned(num(args[0])), unsigned(num(args[2])), F->size());
        r.method = "enumeration";
        r.seconds = since(t0);
    } else if (name == "num_subspaces" || name == "count_nondegenerate" || name == "complement_pairs" ||
               name == "class_size_per_subspace" || name == "centralizer_order" || name == "duo_partner_count") {
        if (name == "count_nondegenerate" && args.size() == 5) {
            GroupType X = parse_group_type(args[3]);
            SubspaceType f;
            if (args[4] == "minus") f = SubspaceType::Minus;
            else if (args[4] == "plus") f = SubspaceType::Plus;
            else if (args[4] == "nondegenerate") f = SubspaceType::Nondegenerate;
            else throw std::invalid_argument("type filter must be minus, plus or nondegenerate");
            r = count_nondegenerate(X, num(args[0]), num(args[1]), num(args[2]), f);
        } else {
            need(4, "d q e X");
            size_t d = num(args[0]);
            uint64_t q = num(args[1]);
            unsigned e = unsigned(num(args[2]));
            GroupType X = parse_group_type(args[3]);
            if (name == "num_subspaces") r = oracle_num_subspaces(X, d, q, e);
            else if (name == "count_nondegenerate") {
                check_parameters(X, d, q);
                r = count_nondegenerate(X, d, q, e);
            } else if (name == "complement_pairs") r = count_complement_pairs(X, d, q, e);
            else {
                check_count_params(X, unsigned(d), q, e);
                if (stingray_primes(X, q, e).empty()) throw std::invalid_argument("no stingray elements for this e");
                if (name == "class_size_per_subspace") {
                    r = oracle_class_size_per_subspace(X, q, e);
                    r.params = std_params(X, d, q, e);
                } else if (name == "centralizer_order") {
                    r = oracle_centralizer_order(X, d, q, e);
                } else {
                    unsigned e2 = unsigned(d) - e;
                    if (e2 < 2 || e2 > e) throw std::invalid_argument("duo_partner_count needs 2 <= d - e <= e");
                    if (stingray_primes(X, q, e2).empty()) throw std::invalid_argument("no stingray elements for e2 = d - e");
                    r = oracle_duo_partner_count(X, d, q, e);
                }
            }
        }
    } else if (name == "rho_gen") {
        need(5, "X d q e1 e2");
        GroupType X = parse_group_type(args[0]);
        auto G = ClassicalGroup::create(X, num(args[1]), num(args[2]));
        auto t0 = Clock::now();
        auto ex = exhaustive_rho_gen(G, unsigned(num(args[3])), unsigned(num(args[4])));
        r.formula = name;
        r.params = {{"X", args[0]}, {"d", args[1]}, {"q", args[2]}, {"e1", args[3]}, {"e2", args[4]}};
        r.value = ex.generating;
        r.ratio = ex.rho_gen;
        r.enumerated = G.order();
        r.expected_universe = G.order();
        r.method = "element-scan";
        r.extra = {{"duos", str(ex.duos)}, {"rho_nongen", to_string(ex.rho_nongen)}, {"proper", str(ex.proper)},
                   {"proper_not_perp", str(ex.proper_not_perp)}, {"reducible", str(ex.reducible)},
                   {"reducible_not_perp", str(ex.reducible_not_perp)}, {"unverified", str(ex.unverified)}};
        for (auto& [k, v] : ex.by_verdict) r.extra.emplace_back("verdict:" + k, str(v));
        r.seconds = since(t0);
    } else {
        throw std::invalid_argument("unknown oracle: " + name);
    }
    if (!cache_file.empty()) {
        std::filesystem::create_directories(cache_file.parent_path());
        std::ofstream out(cache_file);
        out << to_json(r).dump(2) << "\n";
    }
    return r;
}

}  // namespace stingray

#include "ergolab/jets.hpp"

#include <array>
#include <cmath>

#include "ergolab/combinatorics.hpp"
#include "ergolab/errors.hpp"

namespace ergolab {

namespace {

const std::array<double, kMaxJetOrder + 1>& factorials() {
    static const auto table = [] {
        std::array<double, kMaxJetOrder + 1> f{};
        f[0] = 1.0;
        for (int k = 1; k <= kMaxJetOrder; ++k) f[k] = f[k - 1] * k;
        return f;
    }();
    return table;
}

void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder)
        throw PreconditionError("jet order must be between 0 and 12");
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-9 * (1.0 + std::fabs(b)); }

// Normalized Taylor coefficients c[k] = f^(k)/k!.
using Series = std::vector<double>;

Series from_jet(const Jet& j) {
    Series c(j.derivs.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = j.derivs[k] / factorials()[k];
    return c;
}

Jet to_jet(double base, const Series& c) {
    Jet j{base, std::vector<double>(c.size())};
    for (std::size_t k = 0; k < c.size(); ++k) j.derivs[k] = c[k] * factorials()[k];
    return j;
}

Series series_mul(const Series& a, const Series& b) {
    Series r(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// r = 1/v; v[0] != 0 checked by the caller.
Series series_reciprocal(const Series& v) {
    Series r(v.size(), 0.0);
    r[0] = 1.0 / v[0];
    for (std::size_t k = 1; k < v.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += v[j] * r[k - j];
        r[k] = -acc / v[0];
    }
    return r;
}

// Horner evaluation of outer coefficients a at the inner series with its
// constant term zeroed. a[0] survives untouched, keeping order-0 exact.
Series series_compose(const Series& a, const Series& inner) {
    Series z = inner;
    z[0] = 0.0;
    Series r{a.back()};
    r.resize(a.size(), 0.0);
    for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
        r = series_mul(r, z);
        r[0] += a[k];
    }
    return r;
}

// Node-level series rules. The order-0 arithmetic mirrors eval_node in
// expr.cpp operation for operation, so lifted values match evaluate()
// bit-exactly (iterate_jets order-0 == the plain orbit).
struct Lifter {
    double x;
    int order;

    [[noreturn]] void fail(const std::string& what, const ExprNode& n) const {
        Expression sub{std::make_shared<const ExprNode>(n)};
        throw DomainError(what, to_string(sub));
    }

    Series lift(const ExprNode& n) const {
        const std::size_t size = static_cast<std::size_t>(order) + 1;
        switch (n.kind) {
            case NodeKind::Constant: {
                Series c(size, 0.0);
                c[0] = n.value;
                return c;
            }
            case NodeKind::Variable: {
                Series c(size, 0.0);
                c[0] = x;
                if (order >= 1) c[1] = 1.0;
                return c;
            }
            case NodeKind::Neg: {
                Series u = lift(*n.lhs);
                for (double& v : u) v = -v;
                return u;
            }
            case NodeKind::Abs: {
                Series u = lift(*n.lhs);
                if (u[0] > 0.0) return u;
                if (u[0] < 0.0) {
                    for (double& v : u) v = -v;
                    return u;
                }
                if (order == 0) {
                    u[0] = std::fabs(u[0]);
                    return u;
                }
                fail("abs at a zero argument has no derivative", n);
            }
            case NodeKind::Sign: {
                Series u = lift(*n.lhs);
                if (u[0] == 0.0 && order >= 1)
                    fail("sign at a zero argument has no derivative", n);
                Series c(size, 0.0);
                c[0] = static_cast<double>((u[0] > 0.0) - (u[0] < 0.0));
                return c;
            }
            case NodeKind::Sqrt: {
                Series u = lift(*n.lhs);
                if (u[0] < 0.0) fail("sqrt of negative value", n);
                if (u[0] == 0.0 && order >= 1) fail("sqrt has no derivative at zero", n);
                Series v(size, 0.0);
                v[0] = std::sqrt(u[0]);
                for (std::size_t k = 1; k < size; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 1; j < k; ++j) acc += v[j] * v[k - j];
                    v[k] = (u[k] - acc) / (2.0 * v[0]);
                }
                return v;
            }
            case NodeKind::Exp: {
                Series u = lift(*n.lhs);
                Series v(size, 0.0);
                v[0] = std::exp(u[0]);
                for (std::size_t k = 1; k < size; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 1; j <= k; ++j)
                        acc += static_cast<double>(j) * u[j] * v[k - j];
                    v[k] = acc / static_cast<double>(k);
                }
                return v;
            }
            case NodeKind::Log: {
                Series u = lift(*n.lhs);
                if (u[0] <= 0.0) fail("log of nonpositive value", n);
                Series v(size, 0.0);
                v[0] = std::log(u[0]);
                for (std::size_t k = 1; k < size; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 1; j < k; ++j)
                        acc += static_cast<double>(j) * v[j] * u[k - j];
                    v[k] = (u[k] - acc / static_cast<double>(k)) / u[0];
                }
                return v;
            }
            case NodeKind::Sin:
            case NodeKind::Cos: {
                Series u = lift(*n.lhs);
                Series s(size, 0.0), c(size, 0.0);
                s[0] = std::sin(u[0]);
                c[0] = std::cos(u[0]);
                for (std::size_t k = 1; k < size; ++k) {
                    double as = 0.0, ac = 0.0;
                    for (std::size_t j = 1; j <= k; ++j) {
                        as += static_cast<double>(j) * u[j] * c[k - j];
                        ac += static_cast<double>(j) * u[j] * s[k - j];
                    }
                    s[k] = as / static_cast<double>(k);
                    c[k] = -ac / static_cast<double>(k);
                }
                return n.kind == NodeKind::Sin ? s : c;
            }
            case NodeKind::Tanh: {
                Series u = lift(*n.lhs);
                Series t(size, 0.0), g(size, 0.0);  // g = 1 - t^2
                t[0] = std::tanh(u[0]);
                g[0] = 1.0 - t[0] * t[0];
                for (std::size_t k = 1; k < size; ++k) {
                    double at = 0.0;
                    for (std::size_t j = 1; j <= k; ++j)
                        at += static_cast<double>(j) * u[j] * g[k - j];
                    t[k] = at / static_cast<double>(k);
                    double ag = 0.0;
                    for (std::size_t j = 0; j <= k; ++j) ag += t[j] * t[k - j];
                    g[k] = -ag;
                }
                return t;
            }
            case NodeKind::Add:
            case NodeKind::Sub: {
                Series a = lift(*n.lhs);
                Series b = lift(*n.rhs);
                double sgn = n.kind == NodeKind::Add ? 1.0 : -1.0;
                for (std::size_t k = 0; k < size; ++k) a[k] += sgn * b[k];
                if (std::isnan(a[0])) fail("non-finite result", n);
                return a;
            }
            case NodeKind::Mul: {
                Series a = lift(*n.lhs);
                Series b = lift(*n.rhs);
                Series r = series_mul(a, b);
                if (std::isnan(r[0]) && !std::isnan(a[0]) && !std::isnan(b[0]))
                    fail("non-finite result", n);
                return r;
            }
            case NodeKind::Div: {
                Series a = lift(*n.lhs);
                Series b = lift(*n.rhs);
                if (b[0] == 0.0) fail("division by zero", n);
                Series r(size, 0.0);
                r[0] = a[0] / b[0];
                for (std::size_t k = 1; k < size; ++k) {
                    double acc = a[k];
                    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * r[k - j];
                    r[k] = acc / b[0];
                }
                if (std::isnan(r[0]) && !std::isnan(a[0]) && !std::isnan(b[0]))
                    fail("non-finite result", n);
                return r;
            }
            case NodeKind::Pow: {
                Series u = lift(*n.lhs);
                double e = n.value;
                if (num::is_integer(e)) {
                    auto ei = static_cast<long long>(e);
                    if (u[0] == 0.0 && ei < 0) fail("zero base with negative exponent", n);
                    return int_power(u, ei);
                }
                if (u[0] < 0.0) fail("negative base with non-integer exponent", n);
                if (u[0] == 0.0) {
                    if (e < 0.0) fail("zero base with negative exponent", n);
                    if (order >= 1) fail("fractional power has no derivative at zero", n);
                    return Series(size, 0.0);
                }
                Series v(size, 0.0);
                v[0] = std::pow(u[0], e);
                for (std::size_t k = 1; k < size; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 1; j <= k; ++j)
                        acc += ((e + 1.0) * static_cast<double>(j) - static_cast<double>(k)) *
                               u[j] * v[k - j];
                    v[k] = acc / (u[0] * static_cast<double>(k));
                }
                return v;
            }
        }
        fail("unreachable node kind", n);
    }

    // Square-and-multiply in the same order as num::pow_int so the constant
    // terms match scalar evaluation bit for bit.
    static Series int_power(const Series& base, long long e) {
        const std::size_t size = base.size();
        if (e == 0) {
            Series r(size, 0.0);
            r[0] = 1.0;
            return r;
        }
        bool invert = e < 0;
        unsigned long long k = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                      : static_cast<unsigned long long>(e);
        Series acc(size, 0.0);
        acc[0] = 1.0;
        Series sq = base;
        while (k) {
            if (k & 1ULL) acc = series_mul(acc, sq);
            k >>= 1;
            if (k) sq = series_mul(sq, sq);
        }
        return invert ? series_reciprocal(acc) : acc;
    }
};

}  // namespace

Jet jet_lift(const Expression& e, double x, int order) {
    check_order(order);
    Lifter lifter{x, order};
    return to_jet(x, lifter.lift(e.root()));
}

Jet identity_jet(double x, int order) {
    check_order(order);
    Jet j{x, std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0)};
    j.derivs[0] = x;
    if (order >= 1) j.derivs[1] = 1.0;
    return j;
}

Jet constant_jet(double c, double x, int order) {
    check_order(order);
    Jet j{x, std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0)};
    j.derivs[0] = c;
    return j;
}

Jet jet_compose(const Jet& outer, const Jet& inner) {
    if (outer.order() != inner.order())
        throw PreconditionError("jet_compose: mismatched orders");
    if (!close(outer.base, inner.value()))
        throw PreconditionError("jet_compose: outer base point does not match inner value");
    Series result = series_compose(from_jet(outer), from_jet(inner));
    return to_jet(inner.base, result);
}

Jet jet_multiply(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) throw PreconditionError("jet_multiply: mismatched orders");
    if (!close(a.base, b.base)) throw PreconditionError("jet_multiply: mismatched base points");
    Jet r{a.base, std::vector<double>(a.derivs.size(), 0.0)};
    for (int s = 0; s <= a.order(); ++s) {
        double acc = 0.0;
        for (int k = 0; k <= s; ++k)
            acc += comb::binomial(s, k) * a.derivs[s - k] * b.derivs[k];
        r.derivs[s] = acc;
    }
    return r;
}

Jet jet_reciprocal(const Jet& a) {
    if (a.value() == 0.0) throw PreconditionError("jet_reciprocal: value is zero");
    return to_jet(a.base, series_reciprocal(from_jet(a)));
}

Jet jet_scale(const Jet& a, double c) {
    Jet r = a;
    for (double& v : r.derivs) v *= c;
    return r;
}

Jet jet_add(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) throw PreconditionError("jet_add: mismatched orders");
    if (!close(a.base, b.base)) throw PreconditionError("jet_add: mismatched base points");
    Jet r = a;
    for (std::size_t k = 0; k < r.derivs.size(); ++k) r.derivs[k] += b.derivs[k];
    return r;
}

Jet derivative_jet(const Jet& a) {
    if (a.order() < 1) throw PreconditionError("derivative_jet: order must be >= 1");
    Jet r{a.base, std::vector<double>(a.derivs.begin() + 1, a.derivs.end())};
    return r;
}

Jet inverse_function_jet(const Jet& forward) {
    const int order = forward.order();
    if (order < 1) throw PreconditionError("inverse_function_jet: order must be >= 1");
    double fp = forward.derivs[1];
    if (fp == 0.0) throw PreconditionError("inverse_function_jet: vanishing first derivative");
    Jet g{forward.value(), std::vector<double>(forward.derivs.size(), 0.0)};
    g.derivs[0] = forward.base;
    g.derivs[1] = 1.0 / fp;
    std::span<const double> inner(forward.derivs.data() + 1, forward.derivs.size() - 1);
    for (int s = 2; s <= order; ++s) {
        // 0 = (g∘f)^{(s)} = sum_{j=1}^{s} g^{(j)} B_{s,j}(f', ...); the j = s
        // term is g^{(s)} (f')^s.
        double acc = 0.0;
        for (int j = 1; j < s; ++j)
            acc += g.derivs[j] * comb::bell_partial(s, j, inner);
        g.derivs[s] = -acc / num::pow_int(fp, s);
    }
    return g;
}

std::vector<Jet> iterate_jets(const Expression& phi, double x, int n, int order) {
    check_order(order);
    if (n < 0) throw PreconditionError("iterate_jets: negative step count");
    std::vector<Jet> jets;
    jets.reserve(static_cast<std::size_t>(n) + 1);
    jets.push_back(identity_jet(x, order));
    for (int m = 1; m <= n; ++m) {
        double point = jets.back().value();
        Jet step;
        try {
            step = jet_lift(phi, point, order);
        } catch (const DomainError& err) {
            throw EscapeError("orbit left the expression domain at step " + std::to_string(m) +
                                  ": " + err.what(),
                              m, point);
        }
        jets.push_back(jet_compose(step, jets.back()));
    }
    return jets;
}

}  // namespace ergolab

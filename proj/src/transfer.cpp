#include "ioident/transfer.hpp"

#include "ioident/linalg.hpp"

namespace ioident {

namespace {

// sum coeffs[k] * s^k rendered with descending powers, e.g. "s^2 + a31*s"
std::string s_poly_str(const std::vector<RatFunc>& coeffs) {
    std::string out;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
        const RatFunc& c = coeffs[k];
        if (c.is_zero()) continue;
        std::string cs = c.str();
        bool negative = false;
        if (cs.size() > 1 && cs[0] == '-' && cs.find(' ') == std::string::npos) {
            negative = true;
            cs = cs.substr(1);
        }
        std::string term;
        const std::string power = k == 0 ? "" : k == 1 ? "s" : "s^" + std::to_string(k);
        if (power.empty()) {
            term = cs;
        } else if (cs == "1") {
            term = power;
        } else {
            if (cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos)
                cs = "(" + cs + ")";
            term = cs + "*" + power;
        }
        if (out.empty())
            out = negative ? "-" + term : term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

TransferEntry to_entry(const RatFunc& h) {
    TransferEntry e;
    if (h.is_zero()) {
        e.den.push_back(RatFunc::one(h.table()));
        return e;
    }
    const int s = h.table()->s_index();
    // h is reduced as a multivariate rational function, so numerator and
    // denominator are already coprime as polynomials in s; it remains to
    // split off the s-coefficients and make the denominator monic.
    const MultiPoly lead = h.den().coeff_of(s, h.den().degree(s));
    for (int k = 0; k <= h.num().degree(s); ++k)
        e.num.push_back(RatFunc(h.num().coeff_of(s, k), lead));
    for (int k = 0; k <= h.den().degree(s); ++k)
        e.den.push_back(RatFunc(h.den().coeff_of(s, k), lead));
    return e;
}

} // namespace

std::string TransferEntry::str() const {
    if (is_zero()) return "0";
    std::string ns = s_poly_str(num);
    if (den.size() == 1) return ns; // denominator 1
    if (ns.find(' ') != std::string::npos) ns = "(" + ns + ")";
    std::string ds = s_poly_str(den);
    if (ds.find_first_not_of("s^0123456789") != std::string::npos) ds = "(" + ds + ")";
    return ns + "/" + ds;
}

TransferMatrix transfer_matrix(const LinearModel& m) {
    const SymTab& tab = m.table;
    const int n = m.n();
    const RatFunc zero = RatFunc::zero(tab);
    const RatFunc one = RatFunc::one(tab);

    RatMatrix sa(n, RatVector(n, zero));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sa[i][j] = -m.A[i][j];
        sa[i][i] = sa[i][i] + RatFunc::variable(tab, tab->s_index());
    }
    const RatFunc p = n > 0 ? det(sa) : one;

    // adj[i][j] = (-1)^(i+j) det(sa minus row j, column i), so adj/p inverts sa
    RatMatrix adj(n, RatVector(n, zero));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (n == 1) {
                adj[i][j] = one;
                continue;
            }
            RatMatrix minor(n - 1, RatVector(n - 1, zero));
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor[rr][cc++] = sa[r][c];
                }
                ++rr;
            }
            const RatFunc d = det(minor);
            adj[i][j] = (i + j) % 2 == 0 ? d : -d;
        }
    }

    TransferMatrix h(m.m(), std::vector<TransferEntry>(m.kappa()));
    for (int o = 0; o < m.m(); ++o) {
        RatVector cadj(n, zero);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (!m.C[o][i].is_zero()) cadj[j] = cadj[j] + m.C[o][i] * adj[i][j];
        for (int u = 0; u < m.kappa(); ++u) {
            RatFunc acc = zero;
            for (int j = 0; j < n; ++j)
                if (!cadj[j].is_zero() && !m.B[j][u].is_zero()) acc = acc + cadj[j] * m.B[j][u];
            h[o][u] = to_entry(acc / p + m.D[o][u]);
        }
    }
    return h;
}

std::vector<RatFunc> transfer_coefficients(const TransferMatrix& h) {
    std::vector<RatFunc> out;
    auto push = [&](const RatFunc& c) {
        if (c.is_constant()) return;
        for (const auto& f : out)
            if (f == c) return;
        out.push_back(c);
    };
    for (const auto& row : h) {
        for (const auto& e : row) {
            for (const auto& c : e.num) push(c);
            for (const auto& c : e.den) push(c);
        }
    }
    return out;
}

} // namespace ioident

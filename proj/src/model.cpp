#include "ioident/model.hpp"

#include "ioident/errors.hpp"

namespace ioident {

namespace {

bool same_entries(const RatMatrix& a, const RatMatrix& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

} // namespace

bool LinearModel::operator==(const LinearModel& o) const {
    return name == o.name && table->same_as(*o.table) && params == o.params &&
           states == o.states && outputs == o.outputs && inputs == o.inputs &&
           same_entries(A, o.A) && same_entries(B, o.B) && same_entries(C, o.C) &&
           same_entries(D, o.D) && f0 == o.f0 && g0 == o.g0;
}

bool CompartmentModel::operator==(const CompartmentModel& o) const {
    return name == o.name && table->same_as(*o.table) && params == o.params && n == o.n &&
           edges == o.edges && leaks == o.leaks && in_scale == o.in_scale &&
           out_scale == o.out_scale;
}

LinearModel compartment_to_state_space(const CompartmentModel& cm) {
    LinearModel lm;
    lm.name = cm.name;
    lm.table = cm.table;
    lm.params = cm.params;

    const SymTab& t = cm.table;
    auto rate = [&](const std::string& sym) { return RatFunc::variable(t, t->index_of(sym)); };

    for (int i = 1; i <= cm.n; ++i) lm.states.push_back("x" + std::to_string(i));
    for (const auto& [v, c] : cm.out_scale) lm.outputs.push_back("y" + std::to_string(v));
    for (const auto& [v, b] : cm.in_scale) lm.inputs.push_back("u" + std::to_string(v));

    const RatFunc zero = RatFunc::zero(t);
    lm.A.assign(cm.n, RatVector(cm.n, zero));
    for (const auto& e : cm.edges) {
        RatFunc r = rate(e.rate);
        lm.A[e.to - 1][e.from - 1] = lm.A[e.to - 1][e.from - 1] + r;
        lm.A[e.from - 1][e.from - 1] = lm.A[e.from - 1][e.from - 1] - r;
    }
    for (const auto& [v, sym] : cm.leaks)
        lm.A[v - 1][v - 1] = lm.A[v - 1][v - 1] - rate(sym);

    lm.B.assign(cm.n, RatVector(cm.in_scale.size(), zero));
    int col = 0;
    for (const auto& [v, b] : cm.in_scale) lm.B[v - 1][col++] = b;

    lm.C.assign(cm.out_scale.size(), RatVector(cm.n, zero));
    int row = 0;
    for (const auto& [v, c] : cm.out_scale) lm.C[row++][v - 1] = c;

    lm.D.assign(lm.m(), RatVector(lm.kappa(), zero));
    lm.f0.assign(cm.n, zero);
    lm.g0.assign(lm.m(), zero);
    return lm;
}

} // namespace ioident

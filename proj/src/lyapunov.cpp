#include "matchkit/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "matchkit/conditions.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/rng.hpp"

namespace matchkit {

namespace {

// the family of missing triples; throws unless it is pairwise disjoint and
// the structure is complete 3-uniform of order >= 5 otherwise
std::vector<NodeSet> missing_disjoint_triples(const MatchingStructure& h) {
    auto r = rank_antirank(h);
    if (!(r.uniform && r.rank == 3))
        throw unsupported_kind_error("drift table needs a 3-uniform structure");
    if (h.order() < 5)
        throw unsupported_kind_error("drift table needs order >= 5");
    std::set<std::uint32_t> present;
    for (int e = 0; e < h.edge_count(); ++e) present.insert(h.edge(e).bits);
    std::vector<NodeSet> missing;
    for (int a = 0; a < h.order(); ++a)
        for (int b = a + 1; b < h.order(); ++b)
            for (int c = b + 1; c < h.order(); ++c) {
                NodeSet t;
                t.add(a);
                t.add(b);
                t.add(c);
                if (!present.count(t.bits)) missing.push_back(t);
            }
    for (std::size_t i = 0; i < missing.size(); ++i)
        for (std::size_t j = i + 1; j < missing.size(); ++j)
            if (missing[i].intersects(missing[j]))
                throw unsupported_kind_error(
                    "removed hyperedges must be pairwise disjoint");
    return missing;
}

double q_norm(const std::vector<int>& x) {
    double s = 0;
    for (int c : x) s += static_cast<double>(c) * c;
    return s;
}

// exact expectation of Q(X_{n+4}) - Q(X_n) over the four-arrival tree
double four_step_drift(const MatchingStructure& h, const PolicyEngine& ml,
                       const Measure& m, std::vector<int> x0) {
    double q_start = q_norm(x0);
    double total = 0;
    auto rec = [&](auto&& self, const std::vector<int>& x, double weight,
                   int depth) -> void {
        if (depth == 4) {
            total += weight * (q_norm(x) - q_start);
            return;
        }
        for (int v = 0; v < h.order(); ++v) {
            double wv = weight * m(v);
            if (wv == 0) continue;
            auto dist = ml.match_distribution(x, v);
            if (dist.empty()) {
                auto nx = x;
                ++nx[v];
                self(self, nx, wv, depth + 1);
            } else {
                for (auto [e, p] : dist) {
                    auto nx = x;
                    NodeSet ed = h.edge(e);
                    if (ed.size() == 1) {
                        --nx[v];
                    } else {
                        for (int i : ed.members())
                            if (i != v) --nx[i];
                    }
                    self(self, nx, wv * p, depth + 1);
                }
            }
        }
    };
    rec(rec, x0, 1.0, 0);
    return total;
}

} // namespace

std::pair<double, double> embedded_drift_affine(const MatchingStructure& h,
                                                const Measure& m, int node) {
    PolicyEngine ml(h, PolicySpec::match_longest());
    auto drift_at = [&](int level) {
        std::vector<int> x(h.order(), 0);
        x[node] = level;
        return four_step_drift(h, ml, m, x);
    };
    double d10 = drift_at(10), d11 = drift_at(11), d12 = drift_at(12);
    double slope = d11 - d10;
    if (std::fabs((d12 - d11) - slope) > 1e-9 * std::max(1.0, std::fabs(slope)))
        throw numeric_error("embedded drift is not affine at the probed levels");
    return {slope, d10 - slope * 10};
}

double embedded_drift_mc(const MatchingStructure& h, const Measure& m, int node,
                         int x, int blocks, std::uint64_t seed) {
    PolicyEngine ml(h, PolicySpec::match_longest());
    std::vector<double> cum(m.dim());
    double acc = 0;
    for (int i = 0; i < m.dim(); ++i) {
        acc += m(i);
        cum[i] = acc;
    }
    cum.back() = 1.0 + 1e-9;

    double sum = 0;
    for (int b = 0; b < blocks; ++b) {
        CounterRng rng(seed, static_cast<std::uint64_t>(b));
        std::vector<int> s(h.order(), 0);
        s[node] = x;
        double q0 = q_norm(s);
        for (int step = 0; step < 4; ++step) {
            double u = rng.next_double();
            int v = 0;
            while (u >= cum[v]) ++v;
            ml.step_class(s, v, rng);
        }
        sum += q_norm(s) - q0;
    }
    return sum / blocks;
}

double lyapunov_ratio_bound(int q) {
    double qq = q;
    double num = 2 * qq * qq * qq * qq - 9 * qq * qq * qq + 12 * qq * qq - 13 * qq + 12;
    double den = 6 * qq * qq + 10 * qq + 24;
    return std::pow(num / den, 0.25);
}

LyapunovTable lyapunov_coefficients(const MatchingStructure& h, const Measure& m) {
    if (m.dim() != h.order())
        throw input_error("measure dimension does not match structure order");
    LyapunovTable t;
    t.q = h.order();
    t.removed = missing_disjoint_triples(h);
    for (NodeSet r : t.removed) t.removed_union = t.removed_union | r;

    for (int i = 0; i < h.order(); ++i) {
        auto aff = embedded_drift_affine(h, m, i);
        if (t.removed_union.contains(i))
            t.nu_i[h.name_of(i)] = aff;
        else
            t.lambda_i[h.name_of(i)] = aff;
    }

    auto removed_edge_of_pair = [&](int i, int j) -> const NodeSet* {
        for (const NodeSet& r : t.removed)
            if (r.contains(i) && r.contains(j)) return &r;
        return nullptr;
    };
    for (int i = 0; i < h.order(); ++i)
        for (int j = 0; j < h.order(); ++j) {
            if (i == j) continue;
            double rest = 0;
            std::string key = h.name_of(i) + "," + h.name_of(j);
            if (const NodeSet* H = removed_edge_of_pair(i, j)) {
                for (int l = 0; l < h.order(); ++l)
                    if (!H->contains(l)) rest += m(l);
                t.nu_ij[key] = 2 * (m(i) - rest);
            } else {
                for (int l = 0; l < h.order(); ++l)
                    if (l != i && l != j) rest += m(l);
                t.lambda_ij[key] = 2 * (m(i) - rest);
            }
        }
    for (const NodeSet& H : t.removed) {
        double rest = 0;
        for (int l = 0; l < h.order(); ++l)
            if (!H.contains(l)) rest += m(l);
        std::string hname;
        for (int l : H.members()) {
            if (!hname.empty()) hname += ",";
            hname += h.name_of(l);
        }
        for (int l : H.members()) {
            t.alpha_major[hname + ":" + h.name_of(l)] = 2 * (m(l) - rest);
            t.alpha_minor[hname + ":" + h.name_of(l)] = 2 * m(l);
        }
    }

    t.ratio = m.max_weight() / m.min_weight();
    t.ratio_bound = lyapunov_ratio_bound(h.order());
    t.n2 = in_n2(h, m).holds;
    t.n3_strict = in_n3(h, m, true).holds;

    double worst = -1;
    for (const auto& [k, v] : t.lambda_i) worst = std::max(worst, v.first);
    for (const auto& [k, v] : t.nu_i) worst = std::max(worst, v.first);
    t.in_s = (worst < 0) && t.n2 && t.n3_strict;
    t.in_s1 = (t.ratio < t.ratio_bound) && t.n2 && t.n3_strict;
    t.note = "both membership verdicts are sufficient conditions only";
    return t;
}

} // namespace matchkit

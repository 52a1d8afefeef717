#include "matchkit/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace matchkit {

namespace {

void check_pair(const MatchingStructure& s, const Measure& m) {
    if (m.dim() != s.order())
        throw input_error("measure dimension does not match structure order");
}

void require_full_support(const Measure& m) {
    for (int i = 0; i < m.dim(); ++i)
        if (m(i) <= 0.0)
            throw input_error("measure must have full support");
}

ConditionReport strict_report(std::string name, double margin,
                              std::vector<NodeSet> witness) {
    ConditionReport r;
    r.condition = std::move(name);
    r.margin = margin;
    if (margin > kConditionTol) {
        r.holds = true;
    } else if (margin >= -kConditionTol) {
        r.holds = false;
        r.boundary = true;
        r.witness = std::move(witness);
        r.note = "boundary case (at best null recurrent)";
    } else {
        r.holds = false;
        r.witness = std::move(witness);
    }
    return r;
}

ConditionReport weak_report(std::string name, double margin,
                            std::vector<NodeSet> witness) {
    ConditionReport r;
    r.condition = std::move(name);
    r.margin = margin;
    if (margin >= -kConditionTol) {
        r.holds = true;
        r.boundary = margin <= kConditionTol;
    } else {
        r.holds = false;
        r.witness = std::move(witness);
    }
    return r;
}

ConditionReport ncond_impl(const MatchingStructure& g, const Measure& m,
                           const char* name) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("Ncond is defined on graphs and multigraphs");
    check_pair(g, m);
    require_full_support(m);
    double margin = std::numeric_limits<double>::max();
    NodeSet worst;
    bool any = false;
    for (NodeSet I : independent_sets(g)) {
        double slack = m(neighborhood(g, I)) - m(I);
        if (slack < margin) {
            margin = slack;
            worst = I;
        }
        any = true;
    }
    if (!any) {
        // finite model: no independent sets, no constraints
        ConditionReport r;
        r.condition = name;
        r.holds = true;
        r.margin = 1.0;
        r.note = "no independent sets (finite model)";
        return r;
    }
    return strict_report(name, margin, {worst});
}

} // namespace

ConditionReport in_ncond(const MatchingStructure& g, const Measure& m) {
    if (m.mode() != MeasureMode::probability)
        throw input_error("Ncond takes a probability measure");
    return ncond_impl(g, m, "ncond");
}

ConditionReport in_ncond_c(const MatchingStructure& g, const Measure& lam) {
    if (lam.mode() != MeasureMode::intensity)
        throw input_error("Ncond_C takes an intensity vector");
    return ncond_impl(g, lam, "ncond_c");
}

bool is_mu_minimal(const MatchingStructure& h, const Measure& m, NodeSet I) {
    for (int e = 0; e < h.edge_count(); ++e) {
        NodeSet inter = h.edge(e) & I;
        if (inter.empty()) continue;
        if (inter.size() != 1) return false;
        int v = inter.members()[0];
        if (h.degree(v) != 1) return false;
        // v must be the unique argmin of mu over the hyperedge
        for (int k : h.edge(e).members())
            if (k != v && m(k) <= m(v)) return false;
    }
    return true;
}

ConditionReport in_n1_family(const MatchingStructure& h, const Measure& m,
                             N1Variant variant) {
    check_pair(h, m);
    require_full_support(m);
    auto edge_min = [&](int e) {
        double v = std::numeric_limits<double>::max();
        for (int k : h.edge(e).members()) v = std::min(v, m(k));
        return v;
    };
    auto rhs_over_min = [&](NodeSet B) {
        double t = 0;
        for (int e = 0; e < h.edge_count(); ++e) {
            int c = (h.edge(e) & B).size();
            if (c) t += c * edge_min(e);
        }
        return t;
    };

    double margin = std::numeric_limits<double>::max();
    NodeSet worst;
    bool any = false;
    const char* name = "n1";

    switch (variant) {
    case N1Variant::n1:
        for (NodeSet I : independent_sets(h)) {
            if (is_mu_minimal(h, m, I)) continue;
            double slack = rhs_over_min(I) - m(I);
            if (slack < margin) { margin = slack; worst = I; }
            any = true;
        }
        break;
    case N1Variant::n1_plus:
        name = "n1+";
        for (NodeSet I : independent_sets(h)) {
            double t = 0;
            for (int e = 0; e < h.edge_count(); ++e) {
                NodeSet inter = h.edge(e) & I;
                if (inter.empty()) continue;
                double mn = std::numeric_limits<double>::max();
                for (int k : h.edge(e).minus(I).members()) mn = std::min(mn, m(k));
                t += inter.size() * mn;
            }
            double slack = t - m(I);
            if (slack < margin) { margin = slack; worst = I; }
            any = true;
        }
        break;
    case N1Variant::n1_plus_plus: {
        name = "n1++";
        std::uint32_t full = h.all_nodes().bits;
        for (std::uint32_t b = 1; b <= full; ++b) {
            NodeSet B(b);
            double slack = rhs_over_min(B) - m(B);
            if (slack < margin) { margin = slack; worst = B; }
            any = true;
        }
        break;
    }
    }
    if (!any) {
        ConditionReport r;
        r.condition = name;
        r.holds = true;
        r.margin = 1.0;
        r.note = "no applicable sets";
        return r;
    }
    if (variant == N1Variant::n1_plus_plus)
        return weak_report(name, margin, {worst});
    return strict_report(name, margin, {worst});
}

ConditionReport in_n2(const MatchingStructure& h, const Measure& m) {
    check_pair(h, m);
    require_full_support(m);
    auto [w, arg] = min_weight_transversal(h, m.weights());
    double margin = w - 1.0 / rank_antirank(h).rank;
    return strict_report("n2", margin, {arg});
}

ConditionReport in_n3(const MatchingStructure& h, const Measure& m, bool strict) {
    check_pair(h, m);
    require_full_support(m);
    int a = rank_antirank(h).antirank;
    int worst = 0;
    for (int i = 1; i < h.order(); ++i)
        if (m(i) > m(worst)) worst = i;
    double margin = 1.0 / a - m(worst);
    NodeSet w;
    w.add(worst);
    return strict ? strict_report("n3-", margin, {w})
                  : weak_report("n3+", margin, {w});
}

std::optional<HallViolation> find_hall_violation(const MatchingStructure& h) {
    int q = h.order();
    // V1 by size then bits, V2 inside the complement likewise
    std::uint32_t full = h.all_nodes().bits;
    for (int size1 = 2; size1 <= q; ++size1) {
        for (std::uint32_t b1 = 1; b1 <= full; ++b1) {
            NodeSet V1(b1);
            if (V1.size() != size1) continue;
            std::uint32_t comp = full & ~b1;
            for (int size2 = 1; size2 < size1; ++size2) {
                for (std::uint32_t b2 = comp; b2; b2 = (b2 - 1) & comp) {
                    NodeSet V2(b2);
                    if (V2.size() != size2) continue;
                    bool ok = true;
                    for (int e = 0; e < h.edge_count() && ok; ++e)
                        if ((h.edge(e) & V2).size() < (h.edge(e) & V1).size())
                            ok = false;
                    if (ok) return HallViolation{V1, V2};
                }
            }
        }
    }
    return std::nullopt;
}

double hall_ratio_threshold(int q) {
    int f = (q + 1) / 2;
    return (f - 1.0) / f;
}

ConditionReport hall_instability(const MatchingStructure& h, const Measure& m) {
    check_pair(h, m);
    require_full_support(m);
    ConditionReport r;
    r.condition = "hall_instability";
    auto viol = find_hall_violation(h);
    double thresh = hall_ratio_threshold(h.order());
    double ratio = m.min_weight() / m.max_weight();
    r.margin = ratio - thresh;
    if (viol && ratio > thresh + kConditionTol) {
        r.holds = true; // instability established
        r.witness = {viol->v1, viol->v2};
        r.note = "Hall's condition violated and min/max ratio above threshold";
    } else {
        r.holds = false;
        if (viol) {
            r.witness = {viol->v1, viol->v2};
            r.note = "Hall's condition violated but measure ratio below threshold";
        } else {
            r.note = "no Hall violation found";
        }
    }
    return r;
}

Measure extend_measure(const MatchingStructure& g, const Measure& m,
                       const std::map<std::string, double>& split) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("extend_measure needs a multigraph");
    check_pair(g, m);
    std::vector<double> w(m.weights());
    for (int i : g.v1().members()) {
        auto it = split.find(g.name_of(i));
        double s = (it == split.end()) ? 0.5 : it->second;
        if (s < 0.0 || s > 1.0)
            throw input_error("split fractions must lie in [0,1]");
        w[i] = s * m(i);
        w.push_back((1.0 - s) * m(i));
    }
    return Measure(std::move(w), m.mode());
}

Measure extend_measure_half(const MatchingStructure& g, const Measure& m) {
    return extend_measure(g, m, {});
}

Measure reduce_measure(const MatchingStructure& g, const Measure& extended) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("reduce_measure needs a multigraph");
    int copies = g.v1().size();
    if (extended.dim() != g.order() + copies)
        throw input_error("extended measure dimension does not match the blow-up");
    std::vector<double> w(extended.weights().begin(),
                          extended.weights().begin() + g.order());
    auto loops = g.v1().members();
    for (int c = 0; c < copies; ++c) w[loops[c]] += extended(g.order() + c);
    return Measure(std::move(w), extended.mode());
}

namespace {

// projection onto {x >= lo, sum x = mass}
void project_simplex(std::vector<double>& x, double lo, double mass) {
    int n = static_cast<int>(x.size());
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = x[i] - lo;
    double target = mass - n * lo;
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0, theta = 0;
    for (int i = 0; i < n; ++i) {
        css += u[i];
        double t = (css - target) / (i + 1);
        if (u[i] - t > 0) theta = t;
    }
    for (int i = 0; i < n; ++i) x[i] = std::max(0.0, v[i] - theta) + lo;
}

} // namespace

std::optional<Measure> find_ncond_measure(const MatchingStructure& g) {
    if (g.is_hypergraph())
        throw unsupported_kind_error("find_ncond_measure needs a multigraph");
    auto sets = independent_sets(g);
    int n = g.order();
    if (sets.empty()) return Measure::uniform(n); // finite model

    std::vector<NodeSet> nbh;
    nbh.reserve(sets.size());
    for (NodeSet I : sets) nbh.push_back(neighborhood(g, I));

    const double lo = 1e-4;
    std::vector<double> mu(n, 1.0 / n);
    std::vector<double> best = mu;
    double best_val = -std::numeric_limits<double>::max();

    auto eval = [&](const std::vector<double>& x, int* arg) {
        double worst = std::numeric_limits<double>::max();
        for (std::size_t k = 0; k < sets.size(); ++k) {
            double s = 0;
            for (int i : nbh[k].members()) s += x[i];
            for (int i : sets[k].members()) s -= x[i];
            if (s < worst) {
                worst = s;
                if (arg) *arg = static_cast<int>(k);
            }
        }
        return worst;
    };

    for (int t = 1; t <= 4000; ++t) {
        int arg = 0;
        double val = eval(mu, &arg);
        if (val > best_val) {
            best_val = val;
            best = mu;
        }
        double step = 0.25 / std::sqrt(static_cast<double>(t));
        for (int i : nbh[arg].members()) mu[i] += step;
        for (int i : sets[arg].members()) mu[i] -= step;
        project_simplex(mu, lo, 1.0);
    }
    if (best_val <= 1e-9) return std::nullopt;
    Measure cand(best, MeasureMode::probability);
    if (!in_ncond(g, cand).holds) return std::nullopt;
    return cand;
}

std::vector<Measure> grid_measures(int n, int den) {
    std::vector<Measure> out;
    std::vector<int> parts(n, 0);
    auto rec = [&](auto&& self, int idx, int left) -> void {
        if (idx == n - 1) {
            if (left >= 1) {
                parts[idx] = left;
                std::vector<double> w(n);
                for (int i = 0; i < n; ++i) w[i] = static_cast<double>(parts[i]) / den;
                out.push_back(Measure::probability(std::move(w)));
            }
            return;
        }
        for (int k = 1; k <= left - (n - 1 - idx); ++k) {
            parts[idx] = k;
            self(self, idx + 1, left - k);
        }
    };
    rec(rec, 0, den);
    return out;
}

} // namespace matchkit

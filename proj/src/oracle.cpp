#include "matchkit/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace matchkit {

namespace {

constexpr int kDenseLimit = 6000;

// indexed sparse transition rows built by state-space exploration
struct ChainBuilder {
    std::unordered_map<std::string, int> index;
    std::vector<std::string> keys;
    std::vector<std::vector<std::pair<int, double>>> rows;

    int intern(const std::string& key) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(keys.size());
        index.emplace(key, id);
        keys.push_back(key);
        rows.emplace_back();
        return id;
    }
};

std::vector<double> solve_stationary(const std::vector<std::vector<std::pair<int, double>>>& rows) {
    int n = static_cast<int>(rows.size());
    for (const auto& row : rows) {
        double mass = 0;
        for (auto [j, p] : row) mass += p;
        if (std::fabs(mass - 1.0) > 1e-9)
            throw numeric_error("transition row does not sum to 1");
    }

    std::vector<double> pi;
    if (n <= kDenseLimit) {
        // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (auto [j, p] : rows[i]) A(j, i) += p;
        for (int i = 0; i < n; ++i) A(i, i) -= 1.0;
        for (int j = 0; j < n; ++j) A(n - 1, j) = 1.0;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        b(n - 1) = 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        Eigen::VectorXd x = lu.solve(b);
        if (!x.allFinite())
            throw numeric_error("stationary solve failed (singular system)");
        pi.assign(x.data(), x.data() + n);
    } else {
        // power iteration on the lazy chain (P + I)/2, which shares the
        // stationary law and is aperiodic
        pi.assign(n, 1.0 / n);
        std::vector<double> next(n);
        for (int it = 0; it < 200000; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int i = 0; i < n; ++i) {
                next[i] += 0.5 * pi[i];
                for (auto [j, p] : rows[i]) next[j] += 0.5 * p * pi[i];
            }
            double diff = 0;
            for (int i = 0; i < n; ++i) diff += std::fabs(next[i] - pi[i]);
            pi.swap(next);
            if (diff < 1e-14) break;
        }
    }

    for (double& v : pi) v = std::max(v, 0.0);
    double s = 0;
    for (double v : pi) s += v;
    for (double& v : pi) v /= s;

    // residual check on the solved chain
    std::vector<double> res(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (auto [j, p] : rows[i]) res[j] += p * pi[i];
    double err = 0;
    for (int i = 0; i < n; ++i) err += std::fabs(res[i] - pi[i]);
    if (err > 1e-10)
        throw numeric_error("stationary residual " + std::to_string(err) +
                            " exceeds 1e-10");
    return pi;
}

// Reflection makes the solve the conditional law on the retained states.
// The mass beyond the cap is then estimated by geometric extrapolation of
// the outermost levels (exact for the geometric tails of these chains) and
// folded back into the normalization; the estimate is the reported sink
// mass.
OracleResult finish(ChainBuilder& b, const std::vector<double>& leak,
                    const std::vector<int>& level, const std::string& note) {
    auto pi = solve_stationary(b.rows);
    int n = static_cast<int>(b.keys.size());

    int top = 0;
    for (int i = 0; i < n; ++i) top = std::max(top, level[i]);
    double mass_top = 0, mass_prev = 0, flow = 0;
    for (int i = 0; i < n; ++i) {
        if (level[i] == top) mass_top += pi[i];
        if (level[i] == top - 1) mass_prev += pi[i];
        flow += pi[i] * leak[i];
    }
    double tail = 0;
    if (flow > 0 && mass_prev > 0) {
        double rho = mass_top / mass_prev;
        if (rho > 0 && rho < 0.9999) tail = mass_top * rho / (1 - rho);
    }

    OracleResult out;
    out.state_count = n;
    out.truncation_note = note;
    out.sink_mass = (flow > 0) ? tail / (1 + tail) : 0.0;
    double scale = 1.0 / (1 + tail);
    for (int i = 0; i < n; ++i) {
        out.states.push_back(b.keys[i]);
        out.pi.push_back(pi[i] * scale);
    }
    return out;
}

} // namespace

std::map<std::string, double> OracleResult::as_map() const {
    std::map<std::string, double> m;
    for (std::size_t i = 0; i < states.size(); ++i) m[states[i]] = pi[i];
    return m;
}

double OracleResult::probability_of(const std::string& key) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == key) return pi[i];
    return 0.0;
}

std::string class_state_key(const MatchingStructure& s, const std::vector<int>& x) {
    std::string key;
    for (int i = 0; i < s.order(); ++i) {
        if (i) key += ',';
        key += std::to_string(x[i]);
    }
    return key;
}

std::string word_state_key(const MatchingStructure& s, const QueueDetail& w) {
    if (w.letters.empty()) return "-";
    return w.to_string(s);
}

OracleResult truncated_stationary_class(const MatchingStructure& s,
                                        const PolicySpec& policy, const Measure& m,
                                        int cap) {
    if (cap < 2) throw input_error("truncation cap must be at least 2");
    if (m.dim() != s.order())
        throw input_error("measure dimension does not match structure order");
    PolicyEngine engine(s, policy);
    if (engine.word_only_selection())
        throw input_error("class-detail oracle needs a class-admissible policy");

    ChainBuilder b;
    std::vector<double> leak;
    std::vector<int> level;
    std::vector<int> zero(s.order(), 0);
    b.intern(class_state_key(s, zero));
    leak.push_back(0.0);
    level.push_back(0);

    std::deque<std::vector<int>> todo{zero};
    while (!todo.empty()) {
        auto x = todo.front();
        todo.pop_front();
        int id = b.index.at(class_state_key(s, x));
        if (!b.rows[id].empty()) continue;
        std::vector<std::pair<int, double>> row;
        for (int v = 0; v < s.order(); ++v) {
            if (m(v) == 0.0) continue;
            auto dist = engine.match_distribution(x, v);
            if (dist.empty()) {
                auto nx = x;
                ++nx[v];
                int total = 0;
                for (int c : nx) total += c;
                if (total > cap) {
                    row.emplace_back(id, m(v)); // reflected at the boundary
                    leak[id] += m(v);
                } else {
                    bool fresh = !b.index.count(class_state_key(s, nx));
                    int nid = b.intern(class_state_key(s, nx));
                    if (fresh) {
                        todo.push_back(nx);
                        leak.push_back(0.0);
                        level.push_back(total);
                    }
                    row.emplace_back(nid, m(v));
                }
            } else {
                for (auto [e, p] : dist) {
                    auto nx = x;
                    NodeSet ed = s.edge(e);
                    if (ed.size() == 1) {
                        --nx[v];
                    } else {
                        for (int i : ed.members())
                            if (i != v) --nx[i];
                    }
                    bool fresh = !b.index.count(class_state_key(s, nx));
                    int nid = b.intern(class_state_key(s, nx));
                    if (fresh) {
                        todo.push_back(nx);
                        leak.push_back(0.0);
                        int tot = 0;
                        for (int c : nx) tot += c;
                        level.push_back(tot);
                    }
                    row.emplace_back(nid, m(v) * p);
                }
            }
        }
        b.rows[id] = std::move(row);
    }
    return finish(b, leak, level,
                  "class details with total count <= " + std::to_string(cap));
}

OracleResult truncated_stationary_word(const MatchingStructure& s,
                                       const PolicySpec& policy, const Measure& m,
                                       int cap) {
    if (cap < 2) throw input_error("truncation cap must be at least 2");
    if (m.dim() != s.order())
        throw input_error("measure dimension does not match structure order");
    PolicyEngine engine(s, policy);
    if (!policy.word_only())
        throw input_error("word oracle expects fcfm or lcfm (class-admissible "
                          "policies have a class-detail chain)");

    ChainBuilder b;
    std::vector<double> leak;
    std::vector<int> level;
    QueueDetail empty;
    b.intern(word_state_key(s, empty));
    leak.push_back(0.0);
    level.push_back(0);

    std::deque<QueueDetail> todo{empty};
    while (!todo.empty()) {
        auto w = todo.front();
        todo.pop_front();
        int id = b.index.at(word_state_key(s, w));
        if (!b.rows[id].empty()) continue;
        std::vector<std::pair<int, double>> row;
        for (int v = 0; v < s.order(); ++v) {
            if (m(v) == 0.0) continue;
            auto nw = w;
            CounterRng rng(0, 0); // fcfm/lcfm consume no draws
            engine.step_word(nw, v, rng);
            if (nw.length() > cap) {
                row.emplace_back(id, m(v)); // reflected at the boundary
                leak[id] += m(v);
                continue;
            }
            bool fresh = !b.index.count(word_state_key(s, nw));
            int nid = b.intern(word_state_key(s, nw));
            if (fresh) {
                todo.push_back(nw);
                leak.push_back(0.0);
                level.push_back(nw.length());
            }
            row.emplace_back(nid, m(v));
        }
        b.rows[id] = std::move(row);
    }
    return finish(b, leak, level, "words of length <= " + std::to_string(cap));
}

CheckOutcome exhaustive_condition_check(
    const std::vector<MatchingStructure>& family,
    const std::function<std::optional<std::string>(const MatchingStructure&)>& property) {
    CheckOutcome out;
    for (const auto& s : family) {
        ++out.instances;
        auto bad = property(s);
        if (bad) {
            out.passed = false;
            out.counterexample = *bad;
            return out;
        }
    }
    return out;
}

} // namespace matchkit

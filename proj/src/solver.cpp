#include "infharm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace infharm {

namespace {

// Outward-rounded double enclosure of an exact rational. mpq_get_d truncates
// toward zero (error below one ulp), widened one step each way on top of
// that. Non-finite conversions degrade to the whole line, which simply
// forces exact comparisons.
std::pair<double, double> outward_bounds(const Rational& x) {
    const double d = x.approx();
    if (!std::isfinite(d)) {
        return {-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
    const double inf = std::numeric_limits<double>::infinity();
    return {std::nextafter(std::nextafter(d, -inf), -inf),
            std::nextafter(std::nextafter(d, inf), inf)};
}

// r^k and 1+r+...+r^(k-1), grown on demand and shared across one solve.
struct PowerCache {
    explicit PowerCache(Rational r_) : r(std::move(r_)) {}
    Rational r;
    std::vector<Rational> pow{Rational(1)};
    std::vector<Rational> gsum{Rational(0)};
    void ensure(unsigned long n) {
        while (pow.size() <= n) {
            gsum.push_back(gsum.back() + pow.back());
            pow.push_back(pow.back() * r);
        }
    }
};

struct SearchHit {
    Rational numerator;     // slope == numerator / gsum[length]
    unsigned long length = 0;
    int start = -1;
    int end = -1;
};

// Reusable buffers for the per-anchor breadth-first searches.
struct Workspace {
    explicit Workspace(int n)
        : dist(n, 0), stamp(n, 0), dist_back(n, 0), stamp_back(n, 0),
          layer_best(static_cast<std::size_t>(n) + 1, -1) {}
    std::vector<int> dist, stamp;
    std::vector<int> dist_back, stamp_back;
    std::vector<int> queue;
    std::vector<int> layer_best;       // by path length, valid where touched
    std::vector<unsigned long> touched;
    int epoch = 0;
};

// Shortest fresh-inner-vertex distances from `source`; distances land in
// (dist, stamp) or the *_back pair.
void bfs_fresh(const Graph& g, const PartialExtension& partial, int source,
               std::vector<int>& dist, std::vector<int>& stamp, int epoch,
               std::vector<int>& queue) {
    queue.clear();
    for (const Neighbor& nb : g.neighbors(source)) {
        if (!partial.contains(nb.to) && stamp[nb.to] != epoch) {
            stamp[nb.to] = epoch;
            dist[nb.to] = 1;
            queue.push_back(nb.to);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (const Neighbor& nb : g.neighbors(v)) {
            if (!partial.contains(nb.to) && stamp[nb.to] != epoch) {
                stamp[nb.to] = epoch;
                dist[nb.to] = dist[v] + 1;
                queue.push_back(nb.to);
            }
        }
    }
}

// Best eligible path over all ordered anchor pairs. Only nondecreasing
// orientations can win (the reverse of a strictly decreasing path is
// strictly steeper), and for fixed endpoints the shortest path is steepest,
// so per (anchor, distance layer) only the largest-valued endpoint needs an
// exact look. `include_direct` admits the length-1 paths along unused
// edges between two covered vertices.
std::optional<SearchHit> best_connecting(const BoundaryProblem& problem,
                                         const PartialExtension& partial,
                                         PowerCache& pc, Workspace& ws,
                                         bool include_direct) {
    const Graph& g = problem.graph;
    const int n = g.vertex_count();
    std::optional<SearchHit> best;

    auto offer = [&](int a, int b, unsigned long len) {
        if (partial.compare_values(b, a) < 0) return;  // decreasing orientation
        pc.ensure(len);
        Rational num = partial.value(b) - pc.pow[len] * partial.value(a);
        if (best) {
            // slope comparison by cross multiplication; denominators positive
            const Rational lhs = num * pc.gsum[best->length];
            const Rational rhs = best->numerator * pc.gsum[len];
            const auto order = lhs <=> rhs;
            if (order < 0) return;
            if (order == 0 && len >= best->length) return;
        }
        best = SearchHit{std::move(num), len, a, b};
    };

    for (int a = 0; a < n; ++a) {
        if (!partial.contains(a)) continue;
        ws.epoch++;
        ws.touched.clear();
        auto note = [&](unsigned long len, int b) {
            int& slot = ws.layer_best[len];
            const bool fresh_layer =
                std::find(ws.touched.begin(), ws.touched.end(), len) ==
                ws.touched.end();
            if (fresh_layer) {
                ws.touched.push_back(len);
                slot = b;
                return;
            }
            const int c = partial.compare_values(b, slot);
            if (c > 0 || (c == 0 && b < slot)) slot = b;
        };

        ws.queue.clear();
        for (const Neighbor& nb : g.neighbors(a)) {
            if (partial.contains(nb.to)) {
                if (include_direct && nb.to != a && !partial.edge_used[nb.edge])
                    note(1, nb.to);
            } else if (ws.stamp[nb.to] != ws.epoch) {
                ws.stamp[nb.to] = ws.epoch;
                ws.dist[nb.to] = 1;
                ws.queue.push_back(nb.to);
            }
        }
        for (std::size_t head = 0; head < ws.queue.size(); ++head) {
            const int v = ws.queue[head];
            for (const Neighbor& nb : g.neighbors(v)) {
                if (partial.contains(nb.to)) {
                    // never loop back to the start: a path needs two
                    // distinct valued endpoints
                    if (nb.to != a) note(ws.dist[v] + 1, nb.to);
                } else if (ws.stamp[nb.to] != ws.epoch) {
                    ws.stamp[nb.to] = ws.epoch;
                    ws.dist[nb.to] = ws.dist[v] + 1;
                    ws.queue.push_back(nb.to);
                }
            }
        }

        std::sort(ws.touched.begin(), ws.touched.end());
        for (unsigned long len : ws.touched) offer(a, ws.layer_best[len], len);
    }
    return best;
}

// Lexicographically smallest shortest fresh path realizing a hit.
std::vector<int> reconstruct_path(const Graph& g, const PartialExtension& partial,
                                  Workspace& ws, const SearchHit& hit) {
    std::vector<int> path{hit.start};
    if (hit.length == 1) {
        path.push_back(hit.end);
        return path;
    }
    ws.epoch++;
    bfs_fresh(g, partial, hit.start, ws.dist, ws.stamp, ws.epoch, ws.queue);
    bfs_fresh(g, partial, hit.end, ws.dist_back, ws.stamp_back, ws.epoch, ws.queue);
    int cur = hit.start;
    for (unsigned long d = 1; d < hit.length; ++d) {
        int next = -1;
        for (const Neighbor& nb : g.neighbors(cur)) {
            if (partial.contains(nb.to)) continue;
            if (ws.stamp[nb.to] == ws.epoch &&
                ws.dist[nb.to] == static_cast<int>(d) &&
                ws.stamp_back[nb.to] == ws.epoch &&
                ws.dist_back[nb.to] == static_cast<int>(hit.length - d)) {
                next = nb.to;
                break;  // sorted adjacency: first match is smallest id
            }
        }
        if (next < 0) throw std::logic_error("path reconstruction lost the hit");
        path.push_back(next);
        cur = next;
    }
    if (!g.edge_between(cur, hit.end))
        throw std::logic_error("path reconstruction lost the endpoint");
    path.push_back(hit.end);
    return path;
}

ConnectingPath finish_hit(const PartialExtension& partial, PowerCache& pc,
                          Workspace& ws, const Graph& g, const SearchHit& hit) {
    ConnectingPath out;
    out.vertices = reconstruct_path(g, partial, ws, hit);
    out.slope = PathSlope{hit.numerator / pc.gsum[hit.length], hit.length,
                          partial.value(hit.start), partial.value(hit.end)};
    return out;
}

void check_path_shape(const BoundaryProblem& problem,
                      const PartialExtension& partial,
                      const std::vector<int>& vs) {
    const Graph& g = problem.graph;
    if (vs.size() < 2) throw Error("connecting path needs at least two vertices");
    if (vs.front() == vs.back()) throw Error("endpoints must be distinct");
    if (!partial.contains(vs.front()) || !partial.contains(vs.back()))
        throw Error("endpoints must already carry values");
    std::vector<int> inner(vs.begin() + 1, vs.end() - 1);
    for (int v : inner)
        if (partial.contains(v))
            throw Error("inner vertex " + std::to_string(v) + " already valued");
    std::sort(inner.begin(), inner.end());
    if (std::adjacent_find(inner.begin(), inner.end()) != inner.end())
        throw Error("inner vertices must be distinct");
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        auto e = g.edge_between(vs[i], vs[i + 1]);
        if (!e) throw Error("consecutive path vertices must be adjacent");
        if (partial.edge_used[*e]) throw Error("path reuses a consumed edge");
    }
    if (partial.compare_values(vs.front(), vs.back()) > 0)
        throw Error("path endpoints must be nondecreasing");
}

// Values the inner vertices and consumes the edges. Callers have validated
// the path.
void extend_in_place(const BoundaryProblem& problem, PartialExtension& partial,
                     const std::vector<int>& vs) {
    const Graph& g = problem.graph;
    const unsigned long len = vs.size() - 1;
    const std::vector<Rational> fill =
        path_fill(partial.value(vs.front()), partial.value(vs.back()), len,
                  problem.bias.uniform_r());
    for (std::size_t i = 1; i + 1 < vs.size(); ++i)
        partial.assign(vs[i], fill[i - 1]);
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        const int e = *g.edge_between(vs[i], vs[i + 1]);
        if (!partial.edge_used[e]) {
            partial.edge_used[e] = 1;
            partial.used_edge_count++;
        }
    }
}

// Each uncovered component must see exactly one covered vertex; that anchor
// donates its value to the whole component.
void fill_basins(const BoundaryProblem& problem, PartialExtension& partial,
                 std::map<int, int>& anchor_of) {
    const Graph& g = problem.graph;
    const int n = g.vertex_count();
    std::vector<char> seen(n, 0);
    for (int v0 = 0; v0 < n; ++v0) {
        if (partial.contains(v0) || seen[v0]) continue;
        std::vector<int> component{v0};
        seen[v0] = 1;
        int anchor = -1;
        for (std::size_t head = 0; head < component.size(); ++head) {
            for (const Neighbor& nb : g.neighbors(component[head])) {
                if (partial.contains(nb.to)) {
                    if (anchor == -1) anchor = nb.to;
                    else if (anchor != nb.to)
                        throw std::logic_error(
                            "isolated component touches two anchors");
                } else if (!seen[nb.to]) {
                    seen[nb.to] = 1;
                    component.push_back(nb.to);
                }
            }
        }
        if (anchor == -1)
            throw std::logic_error("isolated component touches no anchor");
        const Rational value = partial.value(anchor);
        for (int v : component) {
            partial.assign(v, value);
            anchor_of.emplace(v, anchor);
        }
    }
}

Strategy designations(const BoundaryProblem& problem,
                      const PartialExtension& partial) {
    Strategy out;
    const Graph& g = problem.graph;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (problem.is_boundary(v)) continue;
        int best_max = -1, best_min = -1;
        for (const Neighbor& nb : g.neighbors(v)) {
            if (best_max == -1) {
                best_max = best_min = nb.to;
                continue;
            }
            if (partial.compare_values(nb.to, best_max) > 0) best_max = nb.to;
            if (partial.compare_values(nb.to, best_min) < 0) best_min = nb.to;
        }
        out.emplace(v, DirectionChoice{best_max, best_min});
    }
    return out;
}

}  // namespace

PartialExtension PartialExtension::fresh(const BoundaryProblem& problem) {
    PartialExtension p;
    const int n = problem.graph.vertex_count();
    p.covered.assign(n, 0);
    p.edge_used.assign(problem.graph.edge_count(), 0);
    p.values.assign(n, Rational(0));
    p.value_lo.assign(n, 0.0);
    p.value_hi.assign(n, 0.0);
    for (int v : problem.boundary) p.assign(v, problem.value_at(v));
    return p;
}

const Rational& PartialExtension::value(int v) const {
    if (!covered[v])
        throw Error("vertex " + std::to_string(v) + " is not valued yet");
    return values[v];
}

void PartialExtension::assign(int v, Rational value) {
    if (covered[v]) throw Error("vertex " + std::to_string(v) + " already valued");
    covered[v] = 1;
    covered_count++;
    auto [lo, hi] = outward_bounds(value);
    value_lo[v] = lo;
    value_hi[v] = hi;
    values[v] = std::move(value);
}

int PartialExtension::compare_values(int a, int b) const {
    if (value_hi[a] < value_lo[b]) return -1;
    if (value_lo[a] > value_hi[b]) return 1;
    const int c = mpq_cmp(values[a].raw().get_mpq_t(), values[b].raw().get_mpq_t());
    return (c > 0) - (c < 0);
}

std::optional<ConnectingPath> max_slope_connecting_path(
    const BoundaryProblem& problem, const PartialExtension& partial) {
    PowerCache pc(problem.bias.uniform_r());
    Workspace ws(problem.graph.vertex_count());
    auto hit = best_connecting(problem, partial, pc, ws, /*include_direct=*/true);
    if (!hit) return std::nullopt;
    return finish_hit(partial, pc, ws, problem.graph, *hit);
}

PartialExtension extend_partial(const BoundaryProblem& problem,
                                const PartialExtension& partial,
                                const ConnectingPath& path) {
    check_path_shape(problem, partial, path.vertices);
    PartialExtension out = partial;
    extend_in_place(problem, out, path.vertices);
    return out;
}

BasinFill fill_isolated(const BoundaryProblem& problem,
                        const PartialExtension& partial) {
    PartialExtension scratch = partial;
    BasinFill out;
    fill_basins(problem, scratch, out.anchor);
    for (const auto& [v, a] : out.anchor) out.values.emplace(v, scratch.value(v));
    return out;
}

Solution solve_exact(const BoundaryProblem& problem) {
    if (auto violations = validate(problem); !violations.empty())
        throw ValidationError(std::move(violations));
    if (!problem.bias.is_uniform())
        throw Error(
            "steepest-path solving needs a uniform bias; use the iterative "
            "solvers for per-vertex bias");

    const Graph& g = problem.graph;
    PartialExtension partial = PartialExtension::fresh(problem);
    PowerCache pc(problem.bias.uniform_r());
    Workspace ws(g.vertex_count());

    Solution sol;
    while (true) {
        auto hit =
            best_connecting(problem, partial, pc, ws, /*include_direct=*/false);
        if (!hit) break;
        if (sol.trace.size() >= static_cast<std::size_t>(g.edge_count()))
            throw std::logic_error("selection count exceeded the edge count");
        ConnectingPath path = finish_hit(partial, pc, ws, g, *hit);
        if (!sol.trace.empty() &&
            path.slope.value > sol.trace.back().slope.value)
            throw std::logic_error("selected slopes must be nonincreasing");
        extend_in_place(problem, partial, path.vertices);
        sol.trace.push_back(std::move(path));
    }
    fill_basins(problem, partial, sol.basin_anchor);
    if (partial.covered_count != g.vertex_count())
        throw std::logic_error("some vertex was never valued");

    sol.strategy = designations(problem, partial);
    sol.values = partial.values;

    for (const auto& [v, g_v] : problem.boundary_values)
        if (sol.values[v] != g_v)
            throw std::logic_error("boundary value drifted");
    for (const auto& [v, res] : harmonic_residual(problem, sol.values))
        if (!res.is_zero())
            throw std::logic_error("solution is not exactly harmonic at vertex " +
                                   std::to_string(v));
    return sol;
}

std::map<int, Rational> harmonic_residual(const BoundaryProblem& problem,
                                          const std::vector<Rational>& values) {
    const Graph& g = problem.graph;
    if (values.size() != static_cast<std::size_t>(g.vertex_count()))
        throw Error("value table must cover every vertex");
    std::map<int, Rational> out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (problem.is_boundary(v)) continue;
        const auto nbs = g.neighbors(v);
        if (nbs.empty()) throw Error("interior vertex with no neighbor");
        const Rational* mx = &values[nbs.front().to];
        const Rational* mn = mx;
        for (const Neighbor& nb : nbs) {
            const Rational& val = values[nb.to];
            if (val > *mx) mx = &val;
            if (val < *mn) mn = &val;
        }
        out.emplace(v, problem.bias.p_at(v) * *mx + problem.bias.q_at(v) * *mn -
                           values[v]);
    }
    return out;
}

}  // namespace infharm

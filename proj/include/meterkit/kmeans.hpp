#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "meterkit/features.hpp"

namespace meterkit {

using Point = std::vector<double>;

inline double squared_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw std::invalid_argument("distance: vector lengths differ (" +
                                    std::to_string(p.size()) + " vs " +
                                    std::to_string(q.size()) + ")");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - q[i];
        sum += d * d;
    }
    return sum;
}

inline double euclidean_distance(std::span<const double> p, std::span<const double> q) {
    return std::sqrt(squared_distance(p, q));
}

/// A fitted K-means model. Centroids of profile models live on the ratio
/// simplex (each sums to 1 within 1e-6, being means of sum-1 vectors).
struct ClusterModel {
    int k = 0;
    std::uint64_t seed = 0;
    int restarts = 0;
    double inertia = 0.0;
    double silhouette = 0.0;
    std::vector<Point> centroids;
    std::vector<int> member_counts;

    std::size_t dimension() const { return centroids.empty() ? 0 : centroids[0].size(); }
};

struct KMeansFit {
    ClusterModel model;
    std::vector<int> labels;
};

namespace detail {

inline int nearest_index(std::span<const double> p, const std::vector<Point>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = int(c);
        }
    }
    return best;
}

/// Nearest-centroid assignment with empty-cluster repair: every cluster ends
/// up with at least one member (points.size() >= k required). Repair donates
/// the point farthest from its centroid, taken from a cluster of size >= 2.
inline std::vector<int> assign_all(const std::vector<Point>& points,
                                   const std::vector<Point>& centers) {
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        labels[i] = nearest_index(points[i], centers);

    std::vector<int> sizes(centers.size(), 0);
    for (int l : labels) ++sizes[std::size_t(l)];
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (sizes[c] > 0) continue;
        std::size_t donor = points.size();
        double worst = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (sizes[std::size_t(labels[i])] < 2) continue;
            const double d = squared_distance(points[i], centers[std::size_t(labels[i])]);
            if (d > worst) {
                worst = d;
                donor = i;
            }
        }
        if (donor == points.size()) throw std::logic_error("kmeans: cannot repair empty cluster");
        --sizes[std::size_t(labels[donor])];
        labels[donor] = int(c);
        sizes[c] = 1;
    }
    return labels;
}

inline std::vector<Point> means_of(const std::vector<Point>& points,
                                   const std::vector<int>& labels, int k,
                                   std::size_t dim) {
    std::vector<Point> centers(std::size_t(k), Point(dim, 0.0));
    std::vector<int> sizes(std::size_t(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        ++sizes[std::size_t(labels[i])];
        for (std::size_t d = 0; d < dim; ++d) centers[std::size_t(labels[i])][d] += points[i][d];
    }
    for (int c = 0; c < k; ++c)
        for (std::size_t d = 0; d < dim; ++d) centers[std::size_t(c)][d] /= sizes[std::size_t(c)];
    return centers;
}

struct LloydResult {
    std::vector<Point> centroids;
    std::vector<int> labels;
    double inertia = 0.0;
};

/// Lloyd iterations from the given initial centers until the assignment
/// reaches a fixpoint, or 300 iterations. At exit the centroids equal the
/// member means of the final assignment.
inline LloydResult lloyd_from(const std::vector<Point>& points, std::vector<Point> centers,
                              int max_iterations = 300) {
    const int k = int(centers.size());
    const std::size_t dim = centers[0].size();
    std::vector<int> labels = assign_all(points, centers);
    for (int it = 0; it < max_iterations; ++it) {
        centers = means_of(points, labels, k, dim);
        std::vector<int> next = assign_all(points, centers);
        if (next == labels) break;
        labels = std::move(next);
    }
    LloydResult out{std::move(centers), std::move(labels), 0.0};
    for (std::size_t i = 0; i < points.size(); ++i)
        out.inertia += squared_distance(points[i], out.centroids[std::size_t(out.labels[i])]);
    return out;
}

/// Distance-weighted probabilistic seeding (the standard "++" scheme).
inline std::vector<Point> plusplus_init(const std::vector<Point>& points, int k,
                                        std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<Point> centers;
    centers.reserve(std::size_t(k));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centers.push_back(points[pick(rng)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);
    while (int(centers.size()) < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t chosen;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            const double threshold = u(rng);
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > threshold) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);  // all remaining points coincide with centers
        }
        centers.push_back(points[chosen]);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
    return centers;
}

inline void validate_points(const std::vector<Point>& points, int k) {
    if (k < 2) throw std::invalid_argument("kmeans: k must be at least 2");
    if (points.size() < std::size_t(k))
        throw std::invalid_argument("kmeans: fewer vectors (" + std::to_string(points.size()) +
                                    ") than clusters (" + std::to_string(k) + ")");
    const std::size_t dim = points[0].size();
    if (dim == 0) throw std::invalid_argument("kmeans: zero-dimensional points");
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent dimensions");
}

}  // namespace detail

/// Mean silhouette over all points: (b - a) / max(a, b), where a is the mean
/// intra-cluster distance and b the smallest mean distance to another
/// cluster. Points in singleton clusters contribute 0.
inline double silhouette_score(const std::vector<Point>& points, const std::vector<int>& labels) {
    const std::size_t n = points.size();
    if (labels.size() != n) throw std::invalid_argument("silhouette: size mismatch");
    if (n < 2) throw std::invalid_argument("silhouette: need at least 2 points");
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    std::vector<int> sizes(std::size_t(k), 0);
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("silhouette: negative label");
        ++sizes[std::size_t(l)];
    }
    int populated = 0;
    for (int s : sizes) populated += s > 0;
    if (populated < 2) throw std::invalid_argument("silhouette: need at least 2 clusters");

    double total = 0.0;
    std::vector<double> mean_to(std::size_t(k));
    for (std::size_t i = 0; i < n; ++i) {
        const int own = labels[i];
        if (sizes[std::size_t(own)] == 1) continue;  // singleton contributes 0
        std::fill(mean_to.begin(), mean_to.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_to[std::size_t(labels[j])] += euclidean_distance(points[i], points[j]);
        }
        const double a = mean_to[std::size_t(own)] / double(sizes[std::size_t(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own || sizes[std::size_t(c)] == 0) continue;
            b = std::min(b, mean_to[std::size_t(c)] / double(sizes[std::size_t(c)]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / double(n);
}

/// Best-of-restarts Lloyd K-means with "++" seeding. Deterministic for a
/// given (points, k, seed, restarts); restarts are compared by inertia.
inline KMeansFit kmeans_fit(const std::vector<Point>& points, int k, std::uint64_t seed = 42,
                            int restarts = 10) {
    detail::validate_points(points, k);
    if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be positive");
    std::mt19937_64 rng(seed);
    detail::LloydResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto result = detail::lloyd_from(points, detail::plusplus_init(points, k, rng));
        if (result.inertia < best.inertia) best = std::move(result);
    }
    KMeansFit fit;
    fit.model.k = k;
    fit.model.seed = seed;
    fit.model.restarts = restarts;
    fit.model.inertia = best.inertia;
    fit.model.centroids = std::move(best.centroids);
    fit.model.member_counts.assign(std::size_t(k), 0);
    for (int l : best.labels) ++fit.model.member_counts[std::size_t(l)];
    fit.model.silhouette = silhouette_score(points, best.labels);
    fit.labels = std::move(best.labels);
    return fit;
}

struct KDiagnostic {
    int k = 0;
    double inertia = 0.0;
    double silhouette = 0.0;
};

/// Fits one model per k in [k_min, k_max] under the same seed policy. On top
/// of the restarts, each k > k_min also tries a candidate seeded from the
/// previous k's centroids plus the farthest point, which keeps the inertia
/// column non-increasing in k.
inline std::vector<KDiagnostic> select_k(const std::vector<Point>& points, int k_min, int k_max,
                                         std::uint64_t seed = 42, int restarts = 10) {
    if (k_min < 2 || k_min > k_max)
        throw std::invalid_argument("select_k: need 2 <= k_min <= k_max");
    if (std::size_t(k_max) + 1 > points.size())
        throw std::invalid_argument("select_k: k_max must be at most count-1");
    std::vector<KDiagnostic> table;
    std::vector<Point> previous_centroids;
    for (int k = k_min; k <= k_max; ++k) {
        KMeansFit fit = kmeans_fit(points, k, seed, restarts);
        if (!previous_centroids.empty()) {
            // Grow the previous solution by one centroid at the farthest point.
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                double d = std::numeric_limits<double>::infinity();
                for (const auto& c : previous_centroids)
                    d = std::min(d, squared_distance(points[i], c));
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far_d > 0.0) {
                auto grown = previous_centroids;
                grown.push_back(points[far]);
                auto nested = detail::lloyd_from(points, std::move(grown));
                if (nested.inertia < fit.model.inertia) {
                    fit.model.inertia = nested.inertia;
                    fit.model.centroids = std::move(nested.centroids);
                    fit.model.member_counts.assign(std::size_t(k), 0);
                    for (int l : nested.labels) ++fit.model.member_counts[std::size_t(l)];
                    fit.model.silhouette = silhouette_score(points, nested.labels);
                    fit.labels = std::move(nested.labels);
                }
            }
        }
        table.push_back({k, fit.model.inertia, fit.model.silhouette});
        previous_centroids = std::move(fit.model.centroids);
    }
    return table;
}

/// Smallest k whose silhouette is within `tolerance` of the maximum;
/// fewer clusters are preferable when scores are close.
inline int choose_k(std::span<const KDiagnostic> table, double tolerance = 0.01) {
    if (table.empty()) throw std::invalid_argument("choose_k: empty table");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : table) best = std::max(best, row.silhouette);
    for (const auto& row : table)
        if (row.silhouette >= best - tolerance) return row.k;
    return table.back().k;
}

/// Sum of a centroid's entries over the observed months.
inline double centroid_mass(std::span<const double> centroid,
                            const std::array<bool, 12>& observed) {
    if (centroid.size() != 36)
        throw std::invalid_argument("centroid_mass: centroid must have 36 entries");
    double mass = 0.0;
    for (int m = 0; m < 12; ++m) {
        if (!observed[m]) continue;
        for (Slot s : kAllSlots) mass += centroid[ProfileVector::index(m, s)];
    }
    return mass;
}

/// Entries of the centroid at the observed months, renormalized to sum 1 so
/// that the truncated centroid lives on the same simplex as a partial
/// profile vector.
inline std::vector<double> truncated_centroid(std::span<const double> centroid,
                                              const std::array<bool, 12>& observed) {
    const double mass = centroid_mass(centroid, observed);
    if (mass < 1e-12)
        throw std::domain_error("truncated centroid has no mass on the observed months");
    std::vector<double> out;
    for (int m = 0; m < 12; ++m) {
        if (!observed[m]) continue;
        for (Slot s : kAllSlots) out.push_back(centroid[ProfileVector::index(m, s)] / mass);
    }
    return out;
}

/// Nearest centroid by full 36-dimensional distance; ties break to the
/// lowest cluster id.
inline int assign_full(const ProfileVector& vector, const ClusterModel& model) {
    if (!vector.fully_observed())
        throw std::invalid_argument("assign_full: vector must be fully observed");
    return detail::nearest_index(vector.entries, model.centroids);
}

/// Nearest centroid after truncating each centroid to the observed months
/// and renormalizing. Centroids with (near-)zero mass on the observed months
/// cannot be matched.
inline int assign_partial(const ProfileVector& vector, const ClusterModel& model) {
    if (vector.observed_months() == 0)
        throw std::invalid_argument("assign_partial: no observed months");
    const std::vector<double> partial = vector.packed();
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        if (centroid_mass(model.centroids[c], vector.observed) < 1e-12) continue;
        const double d =
            squared_distance(partial, truncated_centroid(model.centroids[c], vector.observed));
        if (d < best_d) {
            best_d = d;
            best = int(c);
        }
    }
    if (best < 0)
        throw std::domain_error("assign_partial: no centroid has mass on the observed months");
    return best;
}

}  // namespace meterkit

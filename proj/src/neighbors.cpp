#include "tmi/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

namespace tmi {

namespace {

using Candidate = std::pair<double, Eigen::Index>;  // (squared distance, row index)

// Bounded worst-first heap over (distance, index); keeps the k smallest
// candidates under lexicographic order, which is exactly the tie rule
// "equal distance -> lower index wins".
class KBest {
public:
    explicit KBest(int k) : k_(static_cast<std::size_t>(k)) { heap_.reserve(k_); }

    void offer(Candidate c) {
        if (heap_.size() < k_) {
            heap_.push_back(c);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (c < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = c;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    bool full() const { return heap_.size() == k_; }
    double worst() const { return heap_.front().first; }

private:
    std::size_t k_;
    std::vector<Candidate> heap_;
};

// Exact axis-aligned space-partitioning tree. Split plane pruning uses <=
// against the current worst distance so equal-distance candidates in far
// subtrees are still visited; this keeps results identical to brute force.
class KdTree {
public:
    KdTree(const Matrix& points, int leaf_size) : points_(points), leaf_size_(leaf_size) {
        order_.resize(static_cast<std::size_t>(points.rows()));
        for (std::size_t i = 0; i < order_.size(); ++i) {
            order_[i] = static_cast<Eigen::Index>(i);
        }
        nodes_.reserve(2 * order_.size() / static_cast<std::size_t>(leaf_size) + 2);
        root_ = build(0, points.rows());
    }

    double kth_distance(Eigen::Index self, int k) const {
        KBest best(k);
        search(root_, self, best);
        return std::sqrt(best.worst());
    }

private:
    struct Node {
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        Eigen::Index begin = 0;
        Eigen::Index end = 0;
        int left = -1;
        int right = -1;
    };

    int build(Eigen::Index begin, Eigen::Index end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        if (end - begin <= leaf_size_) {
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        const int axis = widest_axis(begin, end);
        const Eigen::Index mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](Eigen::Index a, Eigen::Index b) {
                             return points_(a, axis) < points_(b, axis);
                         });
        const double split = points_(order_[static_cast<std::size_t>(mid)], axis);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    int widest_axis(Eigen::Index begin, Eigen::Index end) const {
        int axis = 0;
        double best_extent = -1.0;
        for (int a = 0; a < static_cast<int>(points_.cols()); ++a) {
            double lo = points_(order_[static_cast<std::size_t>(begin)], a);
            double hi = lo;
            for (Eigen::Index i = begin + 1; i < end; ++i) {
                const double v = points_(order_[static_cast<std::size_t>(i)], a);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_extent) {
                best_extent = hi - lo;
                axis = a;
            }
        }
        return axis;
    }

    void search(int node_id, Eigen::Index self, KBest& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(node_id)];
        const double* query = points_.data() + self * points_.cols();
        if (node.axis < 0) {
            for (Eigen::Index i = node.begin; i < node.end; ++i) {
                const Eigen::Index j = order_[static_cast<std::size_t>(i)];
                if (j == self) continue;
                const double d2 =
                    squared_distance(query, points_.data() + j * points_.cols(), points_.cols());
                best.offer({d2, j});
            }
            return;
        }
        const double diff = query[node.axis] - node.split;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        search(near, self, best);
        if (!best.full() || diff * diff <= best.worst()) {
            search(far, self, best);
        }
    }

    const Matrix& points_;
    int leaf_size_;
    std::vector<Eigen::Index> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

double brute_force_kth(const Matrix& points, Eigen::Index self, int k) {
    const double* query = points.data() + self * points.cols();
    const Eigen::Index n = points.rows();
    if (k <= 32) {
        KBest best(k);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == self) continue;
            best.offer(
                {squared_distance(query, points.data() + j * points.cols(), points.cols()), j});
        }
        return std::sqrt(best.worst());
    }
    std::vector<Candidate> all;
    all.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == self) continue;
        all.emplace_back(squared_distance(query, points.data() + j * points.cols(), points.cols()),
                         j);
    }
    std::nth_element(all.begin(), all.begin() + (k - 1), all.end());
    return std::sqrt(all[static_cast<std::size_t>(k - 1)].first);
}

// Static contiguous chunking; every output slot is a pure function of the
// input, so results do not depend on the thread count.
template <typename Fn>
void parallel_over_rows(Eigen::Index n, Fn&& fn) {
    unsigned num_threads = std::thread::hardware_concurrency();
    if (num_threads == 0) num_threads = 1;
    num_threads = std::min<unsigned>(num_threads, static_cast<unsigned>(n));
    if (num_threads <= 1 || n < 256) {
        fn(Eigen::Index{0}, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    const Eigen::Index chunk = (n + static_cast<Eigen::Index>(num_threads) - 1) /
                               static_cast<Eigen::Index>(num_threads);
    for (unsigned t = 0; t < num_threads; ++t) {
        const Eigen::Index begin = static_cast<Eigen::Index>(t) * chunk;
        const Eigen::Index end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (std::thread& w : workers) {
        w.join();
    }
}

}  // namespace

NeighborBackend parse_backend(const std::string& name) {
    if (name == "brute_force") return NeighborBackend::brute_force;
    if (name == "tree") return NeighborBackend::tree;
    throw UsageError("unknown neighbor backend '" + name + "', expected brute_force or tree");
}

std::string backend_name(NeighborBackend backend) {
    return backend == NeighborBackend::brute_force ? "brute_force" : "tree";
}

double squared_distance(const double* a, const double* b, Eigen::Index dim) {
    double sum = 0.0;
    for (Eigen::Index t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        sum += diff * diff;
    }
    return sum;
}

std::vector<double> kth_neighbor_distances(const Matrix& points, int k, NeighborBackend backend) {
    const Eigen::Index n = points.rows();
    if (k < 1) {
        throw ComputeError("kth_neighbor_distances: k must be >= 1, got " + std::to_string(k));
    }
    if (n <= k) {
        throw ComputeError("kth_neighbor_distances: k=" + std::to_string(k) +
                           " requires at least " + std::to_string(k + 1) + " points, got " +
                           std::to_string(n));
    }
    std::vector<double> distances(static_cast<std::size_t>(n));
    if (backend == NeighborBackend::brute_force) {
        parallel_over_rows(n, [&](Eigen::Index begin, Eigen::Index end) {
            for (Eigen::Index i = begin; i < end; ++i) {
                distances[static_cast<std::size_t>(i)] = brute_force_kth(points, i, k);
            }
        });
    } else {
        const KdTree tree(points, /*leaf_size=*/16);
        parallel_over_rows(n, [&](Eigen::Index begin, Eigen::Index end) {
            for (Eigen::Index i = begin; i < end; ++i) {
                distances[static_cast<std::size_t>(i)] = tree.kth_distance(i, k);
            }
        });
    }
    return distances;
}

std::vector<double> kth_neighbor_distances(const FeatureMatrix& points, int k,
                                           NeighborBackend backend) {
    return kth_neighbor_distances(points.data(), k, backend);
}

}  // namespace tmi

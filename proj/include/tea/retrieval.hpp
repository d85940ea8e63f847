#pragma once

#include <Eigen/Core>

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tea/embedding.hpp"
#include "tea/error.hpp"
#include "tea/types.hpp"

namespace tea {

struct IndexKey {
    ComponentKind kind;
    ComponentName name;

    auto operator<=>(const IndexKey&) const = default;
};

struct RetrievalHit {
    ComponentName name;
    double score;
};

// Node of a balanced routing tree. Internal nodes carry a category label and
// the mean of their descendant leaf vectors; leaves carry component keys.
struct RoutingNode {
    std::string label;
    std::optional<IndexKey> leaf;
    std::vector<RoutingNode> children;
    Eigen::VectorXd centroid;

    bool is_leaf() const { return leaf.has_value(); }
};

struct RoutingTree {
    RoutingNode root;
    int branching = 2;
    int depth = 0;  // edges on the longest root-to-leaf path
    std::size_t leaf_count = 0;
};

struct RouteResult {
    IndexKey chosen;
    int candidates_examined = 0;
};

// Semantic index over component descriptions: one entry per active
// component per kind. Upserts and removals fire inside the owning
// registry's mutation, so the index always mirrors the active registries.
class VectorIndex {
public:
    explicit VectorIndex(std::shared_ptr<Embedder> embedder);

    void upsert(const IndexKey& key, const std::string& text, const std::string& category);
    void remove(const IndexKey& key);
    std::size_t size(ComponentKind kind) const;
    std::size_t size() const;
    bool contains(const IndexKey& key) const;
    Result<Eigen::VectorXd> vector_of(const IndexKey& key) const;

    // Top-k by cosine similarity, descending; ties break by ascending name.
    // Fewer than k entries simply yields a shorter sequence.
    std::vector<RetrievalHit> retrieve(ComponentKind kind, const std::string& query,
                                       std::size_t k) const;

    // Balanced tree over the kind's entries grouped by category; every
    // entry lands at exactly one leaf and depth <= ceil(log_b n) for n >= 2.
    RoutingTree build_routing_tree(ComponentKind kind, int branching) const;

    // Greedy walk: at each internal node descend into the child whose
    // centroid has the highest cosine with the query, ties by child order.
    // candidates_examined counts every node whose similarity was evaluated.
    Result<RouteResult> route(const RoutingTree& tree, const std::string& query) const;

    const Embedder& embedder() const { return *embedder_; }

private:
    struct Entry {
        Eigen::VectorXd vector;
        std::string category;
    };

    std::shared_ptr<Embedder> embedder_;
    mutable std::shared_mutex mu_;
    std::map<IndexKey, Entry> entries_;
};

// Category fallback when the metadata key is absent: the name segment
// before the first '.', or the whole name.
std::string default_category(const ComponentName& name);

}  // namespace tea

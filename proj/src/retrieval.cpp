#include "tea/retrieval.hpp"

#include <algorithm>
#include <mutex>

namespace tea {

std::string default_category(const ComponentName& name) {
    auto dot = name.find('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

VectorIndex::VectorIndex(std::shared_ptr<Embedder> embedder) : embedder_(std::move(embedder)) {}

void VectorIndex::upsert(const IndexKey& key, const std::string& text,
                         const std::string& category) {
    Eigen::VectorXd v = embedder_->embed(text);
    std::unique_lock lock(mu_);
    entries_[key] = Entry{std::move(v), category.empty() ? default_category(key.name) : category};
}

void VectorIndex::remove(const IndexKey& key) {
    std::unique_lock lock(mu_);
    entries_.erase(key);
}

std::size_t VectorIndex::size(ComponentKind kind) const {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (const auto& [key, entry] : entries_) {
        if (key.kind == kind) ++n;
    }
    return n;
}

std::size_t VectorIndex::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

bool VectorIndex::contains(const IndexKey& key) const {
    std::shared_lock lock(mu_);
    return entries_.count(key) > 0;
}

Result<Eigen::VectorXd> VectorIndex::vector_of(const IndexKey& key) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return make_error(ErrorKind::NotFound, "no index entry for '" + key.name + "'");
    }
    return it->second.vector;
}

std::vector<RetrievalHit> VectorIndex::retrieve(ComponentKind kind, const std::string& query,
                                                std::size_t k) const {
    Eigen::VectorXd qv = embedder_->embed(query);
    std::vector<RetrievalHit> hits;
    {
        std::shared_lock lock(mu_);
        for (const auto& [key, entry] : entries_) {
            if (key.kind != kind) continue;
            hits.push_back({key.name, cosine(qv, entry.vector)});
        }
    }
    // Map iteration is name-ascending, so a stable sort on score keeps the
    // required ascending-name tie order.
    std::stable_sort(hits.begin(), hits.end(),
                     [](const RetrievalHit& a, const RetrievalHit& b) { return a.score > b.score; });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

namespace {

struct BuildItem {
    std::string category;
    IndexKey key;
    const Eigen::VectorXd* vector;
};

RoutingNode build_node(const std::vector<BuildItem>& items, std::size_t lo, std::size_t hi,
                       int branching, int embed_dim, int& depth_out) {
    RoutingNode node;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(embed_dim);
    const std::size_t count = hi - lo;
    node.label = items[lo].category == items[hi - 1].category
                     ? items[lo].category
                     : items[lo].category + ".." + items[hi - 1].category;
    if (count <= std::size_t(branching)) {
        for (std::size_t i = lo; i < hi; ++i) {
            RoutingNode leaf;
            leaf.label = items[i].key.name;
            leaf.leaf = items[i].key;
            leaf.centroid = *items[i].vector;
            sum += leaf.centroid;
            node.children.push_back(std::move(leaf));
        }
        depth_out = 1;
    } else {
        // Split into `branching` nearly equal contiguous chunks; the items
        // are sorted by (category, name) so categories stay together.
        int max_child_depth = 0;
        std::size_t base = count / branching;
        std::size_t rem = count % branching;
        std::size_t start = lo;
        for (int c = 0; c < branching && start < hi; ++c) {
            std::size_t len = base + (std::size_t(c) < rem ? 1 : 0);
            if (len == 0) continue;
            int child_depth = 0;
            RoutingNode child =
                build_node(items, start, start + len, branching, embed_dim, child_depth);
            max_child_depth = std::max(max_child_depth, child_depth);
            sum += child.centroid * double(len);
            node.children.push_back(std::move(child));
            start += len;
        }
        depth_out = max_child_depth + 1;
    }
    node.centroid = sum / double(count);
    return node;
}

}  // namespace

RoutingTree VectorIndex::build_routing_tree(ComponentKind kind, int branching) const {
    if (branching < 2) branching = 2;
    RoutingTree tree;
    tree.branching = branching;

    std::shared_lock lock(mu_);
    std::vector<BuildItem> items;
    for (const auto& [key, entry] : entries_) {
        if (key.kind == kind) items.push_back({entry.category, key, &entry.vector});
    }
    tree.leaf_count = items.size();
    if (items.empty()) {
        tree.root.label = "(empty)";
        tree.root.centroid = Eigen::VectorXd::Zero(embedder_->dim());
        return tree;
    }
    std::sort(items.begin(), items.end(), [](const BuildItem& a, const BuildItem& b) {
        return std::tie(a.category, a.key.name) < std::tie(b.category, b.key.name);
    });
    tree.root = build_node(items, 0, items.size(), branching, embedder_->dim(), tree.depth);
    return tree;
}

Result<RouteResult> VectorIndex::route(const RoutingTree& tree, const std::string& query) const {
    if (tree.leaf_count == 0) {
        return make_error(ErrorKind::NotFound, "routing tree is empty");
    }
    Eigen::VectorXd qv = embedder_->embed(query);
    const RoutingNode* node = &tree.root;
    int examined = 0;
    while (!node->is_leaf()) {
        const RoutingNode* best = nullptr;
        double best_score = 0.0;
        for (const auto& child : node->children) {
            double s = cosine(qv, child.centroid);
            ++examined;
            if (!best || s > best_score) {
                best = &child;
                best_score = s;
            }
        }
        if (!best) {
            return make_error(ErrorKind::NotFound, "routing tree node has no children");
        }
        node = best;
    }
    return RouteResult{*node->leaf, examined};
}

}  // namespace tea

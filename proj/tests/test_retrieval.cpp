#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "tea/retrieval.hpp"

using namespace tea;

namespace {

std::shared_ptr<Embedder> shared_embedder() {
    static auto e = std::make_shared<HashedEmbedder>(64);
    return e;
}

std::string random_text(std::mt19937& rng) {
    static const std::vector<std::string> words{
        "adds",  "numbers", "fetches", "weather",  "parses", "html",  "counts", "tokens",
        "plans", "tasks",   "stores",  "records",  "query",  "pages", "files",  "search",
        "agent", "tool",    "browser", "schedule", "graph",  "state", "memory", "trace"};
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
    std::string out;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (!out.empty()) out += " ";
        out += words[pick(rng)];
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("retrieval");

TEST_CASE("empty input embeds to the all-zeros vector") {
    HashedEmbedder e(64);
    CHECK(e.embed("").isZero());
    CHECK(e.embed(" \t\n--").isZero());
}

TEST_CASE("embedding is deterministic") {
    HashedEmbedder e(64);
    const std::string s = "fetches weather by city name";
    CHECK(e.embed(s) == e.embed(s));
}

TEST_CASE("self-similarity of non-empty text is 1") {
    HashedEmbedder e(64);
    auto v = e.embed("adds two integers");
    CHECK(cosine(v, v) == doctest::Approx(1.0));
}

TEST_CASE("cosine of a zero vector is 0") {
    HashedEmbedder e(64);
    CHECK(cosine(e.embed(""), e.embed("anything")) == 0.0);
}

TEST_CASE("index mirrors upserts and removals") {
    VectorIndex index(shared_embedder());
    index.upsert({ComponentKind::tool, "a"}, "one", "");
    index.upsert({ComponentKind::tool, "b"}, "two", "");
    index.upsert({ComponentKind::tool, "c"}, "three", "");
    CHECK(index.size(ComponentKind::tool) == 3);
    index.remove({ComponentKind::tool, "b"});
    CHECK(index.size(ComponentKind::tool) == 2);
    CHECK_FALSE(index.contains({ComponentKind::tool, "b"}));
}

TEST_CASE("upsert after a description change re-embeds the new text") {
    VectorIndex index(shared_embedder());
    index.upsert({ComponentKind::tool, "a"}, "old words", "");
    index.upsert({ComponentKind::tool, "a"}, "completely different text", "");
    auto v = index.vector_of({ComponentKind::tool, "a"});
    REQUIRE(v.ok());
    CHECK(v.value() == shared_embedder()->embed("completely different text"));
}

TEST_CASE("query equal to a registered description ranks first with score 1") {
    VectorIndex index(shared_embedder());
    index.upsert({ComponentKind::tool, "add"}, "adds two integers", "");
    index.upsert({ComponentKind::tool, "fetch"}, "fetches a page over http", "");
    index.upsert({ComponentKind::tool, "plan"}, "plans a task graph", "");
    auto hits = index.retrieve(ComponentKind::tool, "adds two integers", 3);
    REQUIRE(!hits.empty());
    CHECK(hits[0].name == "add");
    CHECK(hits[0].score == doctest::Approx(1.0));
}

TEST_CASE("retrieve on an empty index is empty") {
    VectorIndex index(shared_embedder());
    CHECK(index.retrieve(ComponentKind::tool, "anything", 5).empty());
}

TEST_CASE("retrieve matches the brute-force cosine ranking") {
    auto embedder = shared_embedder();
    std::mt19937 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        VectorIndex index(embedder);
        int n = 5 + int(rng() % 40);
        std::vector<std::pair<std::string, std::string>> rows;
        for (int i = 0; i < n; ++i) {
            std::string name = "t" + std::to_string(i);
            std::string text = random_text(rng);
            rows.emplace_back(name, text);
            index.upsert({ComponentKind::tool, name}, text, "");
        }
        std::string query = random_text(rng);
        auto qv = embedder->embed(query);

        std::vector<RetrievalHit> expect;
        for (const auto& [name, text] : rows) {
            expect.push_back({name, cosine(qv, embedder->embed(text))});
        }
        std::sort(expect.begin(), expect.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
            return a.score != b.score ? a.score > b.score : a.name < b.name;
        });

        size_t k = 1 + rng() % rows.size();
        auto got = index.retrieve(ComponentKind::tool, query, k);
        REQUIRE(got.size() == std::min(k, expect.size()));
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].name == expect[i].name);
            CHECK(got[i].score == doctest::Approx(expect[i].score));
            CHECK(got[i].score <= 1.0);
            CHECK(got[i].score >= -1.0);
        }
    }
}

TEST_CASE("routing tree over four entries with branching 2 stays shallow") {
    VectorIndex index(shared_embedder());
    for (int i = 0; i < 4; ++i) {
        index.upsert({ComponentKind::tool, "t" + std::to_string(i)}, "text " + std::to_string(i),
                     "");
    }
    auto tree = index.build_routing_tree(ComponentKind::tool, 2);
    CHECK(tree.leaf_count == 4);
    CHECK(tree.depth <= 3);
}

TEST_CASE("single entry routes immediately") {
    VectorIndex index(shared_embedder());
    index.upsert({ComponentKind::tool, "only"}, "the only tool", "");
    auto tree = index.build_routing_tree(ComponentKind::tool, 2);
    CHECK(tree.leaf_count == 1);
    auto r = index.route(tree, "anything");
    REQUIRE(r.ok());
    CHECK(r.value().chosen.name == "only");
    CHECK(r.value().candidates_examined == 1);
}

TEST_CASE("routing an empty tree reports not found") {
    VectorIndex index(shared_embedder());
    auto tree = index.build_routing_tree(ComponentKind::tool, 2);
    CHECK_FALSE(index.route(tree, "x").ok());
}

TEST_CASE("a query equal to one leaf description reaches that leaf") {
    // Two well-separated category clusters; verify the greedy walk against
    // an exhaustive per-node similarity table computed by hand below.
    VectorIndex index(shared_embedder());
    index.upsert({ComponentKind::tool, "w1"}, "weather sunny forecast rain", "weather");
    index.upsert({ComponentKind::tool, "w2"}, "weather storm wind humidity", "weather");
    index.upsert({ComponentKind::tool, "m1"}, "matrix algebra determinant", "math");
    index.upsert({ComponentKind::tool, "m2"}, "matrix inverse eigenvalues", "math");
    auto tree = index.build_routing_tree(ComponentKind::tool, 2);
    auto r = index.route(tree, "weather storm wind humidity");
    REQUIRE(r.ok());
    CHECK(r.value().chosen.name == "w2");
}

TEST_CASE("256 entries with branching 4 keep the depth and routing bounds") {
    VectorIndex index(shared_embedder());
    std::mt19937 rng(5);
    for (int i = 0; i < 256; ++i) {
        index.upsert({ComponentKind::tool, "t" + std::to_string(i)}, random_text(rng),
                     "cat" + std::to_string(i % 16));
    }
    auto tree = index.build_routing_tree(ComponentKind::tool, 4);
    CHECK(tree.leaf_count == 256);
    // ceil(log4 256) + 1 = 5
    CHECK(tree.depth <= 5);
    for (int q = 0; q < 100; ++q) {
        auto r = index.route(tree, random_text(rng));
        REQUIRE(r.ok());
        CHECK(r.value().candidates_examined <= 4 * tree.depth);
        CHECK(r.value().candidates_examined <= 16);
    }
}

TEST_CASE("every component lands at exactly one leaf") {
    VectorIndex index(shared_embedder());
    std::mt19937 rng(6);
    int n = 37;
    for (int i = 0; i < n; ++i) {
        index.upsert({ComponentKind::agent, "a" + std::to_string(i)}, random_text(rng), "");
    }
    auto tree = index.build_routing_tree(ComponentKind::agent, 3);
    std::vector<std::string> seen;
    std::function<void(const RoutingNode&)> walk = [&](const RoutingNode& node) {
        if (node.is_leaf()) {
            seen.push_back(node.leaf->name);
            return;
        }
        for (const auto& child : node.children) walk(child);
    };
    walk(tree.root);
    std::sort(seen.begin(), seen.end());
    CHECK(seen.size() == size_t(n));
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_SUITE_END();

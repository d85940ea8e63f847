#include "tea/embedding.hpp"

#include <cctype>
#include <cstdint>
#include <random>

namespace tea {

namespace {

// FNV-1a: stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& token) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

HashedEmbedder::HashedEmbedder(int dim, int buckets, unsigned seed) {
    projection_.resize(dim, buckets);
    std::mt19937 rng(seed);
    for (int j = 0; j < buckets; ++j) {
        for (int i = 0; i < dim; ++i) {
            // Uniform in [-1, 1] from raw draws; avoids distribution
            // implementation differences across standard libraries.
            projection_(i, j) = (double(rng()) / double(std::mt19937::max())) * 2.0 - 1.0;
        }
    }
}

Eigen::VectorXd HashedEmbedder::embed(const std::string& text) const {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(projection_.cols());
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            counts[fnv1a(token) % std::uint64_t(projection_.cols())] += 1.0;
            token.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            token.push_back(char(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    if (counts.isZero()) return Eigen::VectorXd::Zero(projection_.rows());
    return projection_ * counts;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = a.dot(b) / (na * nb);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

}  // namespace tea

#pragma once

#include <Eigen/Core>

#include <string>

namespace tea {

// Text embedding contract: fixed output dimension, identical vectors for
// identical input. The default implementation is a hashed bag-of-tokens
// projection; semantic-quality backends plug in behind the same interface.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual int dim() const = 0;
    virtual Eigen::VectorXd embed(const std::string& text) const = 0;
};

// Lowercase word tokens are hashed into `buckets` counting bins, then
// projected to `dim` through a fixed seeded random matrix. Empty input maps
// to the all-zeros vector.
class HashedEmbedder final : public Embedder {
public:
    explicit HashedEmbedder(int dim = 64, int buckets = 512, unsigned seed = 0x7e0a);

    int dim() const override { return static_cast<int>(projection_.rows()); }
    Eigen::VectorXd embed(const std::string& text) const override;

private:
    Eigen::MatrixXd projection_;  // dim x buckets
};

// Cosine similarity; defined as 0 when either vector is zero.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace tea

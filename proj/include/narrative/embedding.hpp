#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "narrative/error.hpp"

namespace narrative {

using Vector = std::vector<double>;

inline constexpr std::size_t kDefaultEmbeddingDim = 768;

enum class ProviderKind { builtin, external };

/// `endpoint` is required for the external kind: either an `http://host:port`
/// base URL serving POST /embed, or `exec:<shell command>` for a child
/// process speaking newline-delimited JSON on stdin/stdout.
struct EmbeddingProviderConfig {
    ProviderKind kind = ProviderKind::builtin;
    std::string endpoint;
    std::size_t dim = kDefaultEmbeddingDim;

    /// Throws ConfigError.
    void validate() const;
};

class ProviderError : public Error {
public:
    enum class Kind { unreachable, protocol, dimension_mismatch };

    ProviderError(Kind kind, const std::string& what) : Error(ErrorCategory::provider, what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// One vector per text, in input order.
    virtual std::vector<Vector> embed(const std::vector<std::string>& texts) = 0;
    virtual std::size_t dim() const = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Character 3-grams (code points) hashed with FNV-1a into `dim` term-frequency
/// buckets, then L2-normalized. Texts shorter than three code points hash
/// as one gram; the empty text maps to the zero vector.
class HashingProvider final : public EmbeddingProvider {
public:
    explicit HashingProvider(std::size_t dim = kDefaultEmbeddingDim, unsigned workers = 1);

    Vector embed_one(std::string_view text) const;
    std::vector<Vector> embed(const std::vector<std::string>& texts) override;
    std::size_t dim() const override { return dim_; }

private:
    std::size_t dim_;
    unsigned workers_;
};

/// Builds the provider named by `config` (validated first).
std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingProviderConfig& config, unsigned workers = 1);

/// Wraps a provider; each distinct text is embedded once per instance.
class CachingEmbedder {
public:
    explicit CachingEmbedder(EmbeddingProvider& provider) : provider_(provider) {}

    std::vector<Vector> embed(const std::vector<std::string>& texts);
    std::size_t cached() const { return cache_.size(); }
    std::size_t provider_calls() const { return provider_calls_; }

private:
    EmbeddingProvider& provider_;
    std::unordered_map<std::string, Vector> cache_;
    std::size_t provider_calls_ = 0;
};

std::vector<Vector> embed_batch(const std::vector<std::string>& texts, const EmbeddingProviderConfig& config);

/// dot(a, b) / (|a| |b|) clamped to [-1, 1]; 0 when either norm is zero.
/// Throws std::invalid_argument on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

/// Checks a provider response: count, dimension, finiteness, unit norm
/// (zero only for empty text). Throws ProviderError.
void validate_vectors(const std::vector<std::string>& texts, const std::vector<Vector>& vectors, std::size_t dim);

}  // namespace narrative

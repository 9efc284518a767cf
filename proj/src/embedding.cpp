#include "narrative/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "narrative/parallel.hpp"
#include "narrative/text.hpp"

namespace narrative {

std::unique_ptr<EmbeddingProvider> make_external_provider(const EmbeddingProviderConfig& config);

void EmbeddingProviderConfig::validate() const {
    if (dim == 0) throw ConfigError("embedding dimension must be positive");
    if (kind == ProviderKind::external && endpoint.empty()) {
        throw ConfigError("external embedding provider requires an endpoint");
    }
    if (kind == ProviderKind::builtin && !endpoint.empty()) {
        throw ConfigError("an endpoint is only valid with the external provider");
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

HashingProvider::HashingProvider(std::size_t dim, unsigned workers) : dim_(dim), workers_(workers) {
    if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

Vector HashingProvider::embed_one(std::string_view input) const {
    Vector v(dim_, 0.0);
    if (input.empty()) return v;
    auto cps = text::code_points(input);
    if (cps.size() < 3) {
        v[fnv1a64(input) % dim_] += 1.0;
    } else {
        for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
            auto begin = cps[i].data();
            auto end = cps[i + 2].data() + cps[i + 2].size();
            v[fnv1a64(std::string_view(begin, static_cast<std::size_t>(end - begin))) % dim_] += 1.0;
        }
    }
    double sq = 0.0;
    for (double x : v) sq += x * x;
    double norm = std::sqrt(sq);
    for (double& x : v) x /= norm;
    return v;
}

std::vector<Vector> HashingProvider::embed(const std::vector<std::string>& texts) {
    std::vector<Vector> out(texts.size());
    parallel_for(texts.size(), workers_, [&](std::size_t i) { out[i] = embed_one(texts[i]); });
    return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingProviderConfig& config, unsigned workers) {
    config.validate();
    if (config.kind == ProviderKind::builtin) return std::make_unique<HashingProvider>(config.dim, workers);
    return make_external_provider(config);
}

std::vector<Vector> CachingEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::string> missing;
    std::unordered_map<std::string, bool> queued;
    for (const auto& t : texts) {
        if (!cache_.count(t) && queued.emplace(t, true).second) missing.push_back(t);
    }
    if (!missing.empty()) {
        auto vectors = provider_.embed(missing);
        ++provider_calls_;
        validate_vectors(missing, vectors, provider_.dim());
        for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(vectors[i]));
    }
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(cache_.at(t));
    return out;
}

std::vector<Vector> embed_batch(const std::vector<std::string>& texts, const EmbeddingProviderConfig& config) {
    auto provider = make_provider(config);
    CachingEmbedder embedder(*provider);
    return embedder.embed(texts);
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    double dot = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) return 0.0;
    double c = dot / std::sqrt(aa * bb);
    return std::clamp(c, -1.0, 1.0);
}

void validate_vectors(const std::vector<std::string>& texts, const std::vector<Vector>& vectors, std::size_t dim) {
    if (vectors.size() != texts.size()) {
        throw ProviderError(ProviderError::Kind::protocol, "provider returned " + std::to_string(vectors.size()) +
                                                               " vectors for " + std::to_string(texts.size()) +
                                                               " texts");
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto& v = vectors[i];
        if (v.size() != dim) {
            throw ProviderError(ProviderError::Kind::dimension_mismatch,
                                "provider vector " + std::to_string(i) + " has dimension " +
                                    std::to_string(v.size()) + ", expected " + std::to_string(dim));
        }
        double sq = 0.0;
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw ProviderError(ProviderError::Kind::protocol,
                                    "provider vector " + std::to_string(i) + " has a non-finite component");
            }
            sq += x * x;
        }
        double norm = std::sqrt(sq);
        bool ok = std::fabs(norm - 1.0) <= 1e-6 || (norm == 0.0 && texts[i].empty());
        if (!ok) {
            throw ProviderError(ProviderError::Kind::protocol,
                                "provider vector " + std::to_string(i) + " is not unit-normalized");
        }
    }
}

}  // namespace narrative

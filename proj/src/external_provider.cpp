#include <csignal>
#include <cstdio>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "narrative/embedding.hpp"

namespace narrative {

namespace {

using json = nlohmann::json;

constexpr std::size_t kBatchSize = 64;

std::string request_body(const std::vector<std::string>& texts) {
    return json{{"texts", texts}}.dump();
}

std::vector<Vector> parse_response(const std::string& body, std::size_t dim) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw ProviderError(ProviderError::Kind::protocol, std::string("provider response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("vectors") || !doc["dim"].is_number_integer() ||
        !doc["vectors"].is_array()) {
        throw ProviderError(ProviderError::Kind::protocol, "provider response must be {\"dim\": n, \"vectors\": [...]}");
    }
    auto reported = doc["dim"].get<long long>();
    if (reported != static_cast<long long>(dim)) {
        throw ProviderError(ProviderError::Kind::dimension_mismatch,
                            "provider reports dim " + std::to_string(reported) + ", configured " + std::to_string(dim));
    }
    std::vector<Vector> vectors;
    for (const auto& row : doc["vectors"]) {
        if (!row.is_array()) throw ProviderError(ProviderError::Kind::protocol, "provider vector is not an array");
        Vector v;
        v.reserve(row.size());
        for (const auto& x : row) {
            if (!x.is_number()) throw ProviderError(ProviderError::Kind::protocol, "non-numeric vector component");
            v.push_back(x.get<double>());
        }
        vectors.push_back(std::move(v));
    }
    return vectors;
}

template <typename Send>
std::vector<Vector> embed_in_batches(const std::vector<std::string>& texts, std::size_t dim, Send&& send) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); i += kBatchSize) {
        std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(i),
                                       texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), i + kBatchSize)));
        auto vectors = parse_response(send(request_body(batch)), dim);
        validate_vectors(batch, vectors, dim);
        for (auto& v : vectors) out.push_back(std::move(v));
    }
    return out;
}

class HttpProvider final : public EmbeddingProvider {
public:
    HttpProvider(const std::string& endpoint, std::size_t dim) : dim_(dim) {
        auto scheme_end = endpoint.find("://");
        auto path_start = endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        base_ = endpoint.substr(0, path_start);
        path_ = path_start == std::string::npos ? "" : endpoint.substr(path_start);
        while (!path_.empty() && path_.back() == '/') path_.pop_back();
        path_ += "/embed";
    }

    std::vector<Vector> embed(const std::vector<std::string>& texts) override {
        httplib::Client client(base_);
        if (!client.is_valid()) {
            throw ProviderError(ProviderError::Kind::unreachable, "invalid embedding endpoint " + base_);
        }
        client.set_connection_timeout(10);
        client.set_read_timeout(300);
        return embed_in_batches(texts, dim_, [&](const std::string& body) {
            auto res = client.Post(path_, body, "application/json");
            if (!res) {
                throw ProviderError(ProviderError::Kind::unreachable,
                                    "embedding provider " + base_ + " unreachable: " + httplib::to_string(res.error()));
            }
            if (res->status != 200) {
                throw ProviderError(ProviderError::Kind::protocol,
                                    "embedding provider returned HTTP " + std::to_string(res->status));
            }
            return res->body;
        });
    }

    std::size_t dim() const override { return dim_; }

private:
    std::size_t dim_;
    std::string base_;
    std::string path_;
};

/// Child process speaking one JSON object per line on stdin/stdout.
class ProcessProvider final : public EmbeddingProvider {
public:
    ProcessProvider(const std::string& command, std::size_t dim) : dim_(dim) {
        std::signal(SIGPIPE, SIG_IGN);
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw ProviderError(ProviderError::Kind::unreachable, "cannot create pipes for provider process");
        }
        pid_ = fork();
        if (pid_ < 0) throw ProviderError(ProviderError::Kind::unreachable, "cannot fork provider process");
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        write_fd_ = to_child[1];
        reader_ = fdopen(from_child[0], "r");
    }

    ProcessProvider(const ProcessProvider&) = delete;
    ProcessProvider& operator=(const ProcessProvider&) = delete;

    ~ProcessProvider() override {
        if (write_fd_ >= 0) close(write_fd_);
        if (reader_) fclose(reader_);
        if (pid_ > 0) waitpid(pid_, nullptr, 0);
    }

    std::vector<Vector> embed(const std::vector<std::string>& texts) override {
        return embed_in_batches(texts, dim_, [&](const std::string& body) {
            std::string line = body + "\n";
            std::size_t written = 0;
            while (written < line.size()) {
                auto n = write(write_fd_, line.data() + written, line.size() - written);
                if (n <= 0) throw ProviderError(ProviderError::Kind::unreachable, "provider process closed its input");
                written += static_cast<std::size_t>(n);
            }
            std::string reply;
            int c;
            while ((c = std::fgetc(reader_)) != EOF && c != '\n') reply.push_back(static_cast<char>(c));
            if (c == EOF && reply.empty()) {
                throw ProviderError(ProviderError::Kind::unreachable, "provider process exited without replying");
            }
            return reply;
        });
    }

    std::size_t dim() const override { return dim_; }

private:
    std::size_t dim_;
    pid_t pid_ = -1;
    int write_fd_ = -1;
    std::FILE* reader_ = nullptr;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_external_provider(const EmbeddingProviderConfig& config) {
    const std::string exec_prefix = "exec:";
    if (config.endpoint.rfind(exec_prefix, 0) == 0) {
        return std::make_unique<ProcessProvider>(config.endpoint.substr(exec_prefix.size()), config.dim);
    }
    if (config.endpoint.rfind("http://", 0) != 0) {
        throw ConfigError("embedding endpoint must start with http:// or exec: (got '" + config.endpoint + "')");
    }
    return std::make_unique<HttpProvider>(config.endpoint, config.dim);
}

}  // namespace narrative

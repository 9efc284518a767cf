#include "acceptance/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <map>

namespace oracle {

namespace {

std::vector<std::string> code_points(const std::string& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size();) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
        out.push_back(s.substr(i, len));
        i += len;
    }
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::vector<long double> trigram_embedding(const std::string& text, std::size_t dim) {
    std::vector<long double> v(dim, 0.0L);
    auto cps = code_points(text);
    if (cps.empty()) return v;
    std::vector<std::string> grams;
    if (cps.size() < 3) {
        grams.push_back(text);
    } else {
        for (std::size_t i = 0; i + 3 <= cps.size(); ++i) grams.push_back(cps[i] + cps[i + 1] + cps[i + 2]);
    }
    for (const auto& g : grams) v[fnv1a(g) % dim] += 1.0L;
    long double sq = 0;
    for (auto x : v) sq += x * x;
    for (auto& x : v) x /= sqrtl(sq);
    return v;
}

long double cosine(const std::vector<long double>& a, const std::vector<long double>& b) {
    long double dot = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0 || bb == 0) return 0;
    return dot / sqrtl(aa * bb);
}

long double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    return cosine(std::vector<long double>(a.begin(), a.end()), std::vector<long double>(b.begin(), b.end()));
}

std::vector<long double> monthly_sum(const std::vector<ChainTerm>& terms, std::size_t months, long double a,
                                     long double b) {
    std::vector<long double> out(months, 0.0L);
    for (const auto& t : terms) {
        long double lag = floorl(static_cast<long double>(t.lag_days) / 30.4375L);
        out.at(static_cast<std::size_t>(t.rear_slot)) += t.similarity / (1.0L + a * expl(b * lag));
    }
    return out;
}

long double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    long double cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double dx = x[i] - mx, dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    return cov / sqrtl(vx * vy);
}

}  // namespace oracle

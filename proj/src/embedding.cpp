#include "relmap/embedding.hpp"

#include <httplib.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"

namespace relmap {
namespace {

using json = nlohmann::json;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = kFnvOffset ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void normalize_in_place(Vector& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw EmbeddingUnavailableError("zero vector cannot be normalized");
  for (double& x : v) x /= norm;
}

}  // namespace

std::vector<Vector> EmbeddingProvider::embed_batch(std::span<const std::string> texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

double cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::logic_error("cosine of vectors with different dimensions");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
  std::ostringstream name;
  name << "hashed-ngram-d" << dimension_ << "-s" << std::hex << seed_;
  id_ = name.str();
}

Vector HashedNgramEmbedder::embed(std::string_view text) {
  const std::string norm = normalize_text(text);
  if (norm.empty()) throw InputError("cannot embed empty text");
  Vector v(dimension_, 0.0);
  auto add = [&](std::string_view feature) {
    const auto h = fnv1a(feature, seed_);
    v[h % dimension_] += (h >> 63) ? -1.0 : 1.0;
  };
  std::istringstream words(norm);
  std::string word;
  while (words >> word) {
    add("w:" + word);
    const std::string padded = "<" + word + ">";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) add("c:" + padded.substr(i, 3));
  }
  normalize_in_place(v);
  return v;
}

// ---------------------------------------------------------------------------

RemoteEmbedder::RemoteEmbedder(std::string base_url, std::string model_id, std::size_t dimension,
                               std::size_t max_batch)
    : base_url_(std::move(base_url)),
      model_id_(std::move(model_id)),
      dimension_(dimension),
      max_batch_(std::max<std::size_t>(1, max_batch)) {}

Vector RemoteEmbedder::embed(std::string_view text) {
  const std::string t(text);
  return embed_batch(std::span<const std::string>(&t, 1)).front();
}

std::vector<Vector> RemoteEmbedder::embed_batch(std::span<const std::string> texts) {
  std::vector<Vector> out;
  for (std::size_t begin = 0; begin < texts.size(); begin += max_batch_) {
    const auto chunk = texts.subspan(begin, std::min(max_batch_, texts.size() - begin));
    httplib::Client cli(base_url_);
    cli.set_connection_timeout(5);
    cli.set_read_timeout(60);
    const json request{{"texts", std::vector<std::string>(chunk.begin(), chunk.end())}};
    const auto res = cli.Post("/embed", request.dump(), "application/json");
    if (!res) throw EmbeddingUnavailableError("embedding service " + base_url_ + ": " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw EmbeddingUnavailableError("embedding service " + base_url_ + ": HTTP " + std::to_string(res->status));
    }
    try {
      const auto body = json::parse(res->body);
      const auto model = body.at("model").get<std::string>();
      const auto dim = body.at("dim").get<std::size_t>();
      if (model_id_.empty()) model_id_ = model;
      if (model != model_id_) {
        throw EmbeddingUnavailableError("embedding service switched model from " + model_id_ + " to " + model);
      }
      if (dimension_ == 0) dimension_ = dim;
      const auto& vectors = body.at("vectors");
      if (vectors.size() != chunk.size()) throw ParseError("embedding service returned wrong vector count");
      for (const auto& row : vectors) {
        Vector v = row.get<Vector>();
        if (v.size() != dimension_) throw ParseError("embedding service returned wrong dimension");
        normalize_in_place(v);
        out.push_back(std::move(v));
      }
    } catch (const json::exception& e) {
      throw ParseError("malformed embedding response: " + std::string(e.what()));
    }
  }
  return out;
}

std::pair<std::string, std::size_t> RemoteEmbedder::health() const {
  httplib::Client cli(base_url_);
  cli.set_connection_timeout(5);
  const auto res = cli.Get("/health");
  if (!res || res->status != 200) throw EmbeddingUnavailableError("embedding service not ready at " + base_url_);
  try {
    const auto body = json::parse(res->body);
    return {body.at("model").get<std::string>(), body.at("dim").get<std::size_t>()};
  } catch (const json::exception& e) {
    throw ParseError("malformed health response: " + std::string(e.what()));
  }
}

// ---------------------------------------------------------------------------

FileCacheEmbedder::FileCacheEmbedder(std::filesystem::path path, std::shared_ptr<EmbeddingProvider> upstream,
                                     std::string provider_id, std::size_t dimension)
    : path_(std::move(path)),
      upstream_(std::move(upstream)),
      provider_id_(std::move(provider_id)),
      dimension_(dimension) {
  if (provider_id_.empty() && upstream_) provider_id_ = upstream_->id();
  if (dimension_ == 0 && upstream_) dimension_ = upstream_->dimension();

  std::ifstream in(path_);
  std::string line;
  std::size_t line_no = 0;
  while (in && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      const auto provider = rec.at("provider").get<std::string>();
      if (provider_id_.empty()) provider_id_ = provider;
      if (provider != provider_id_) continue;
      Vector v = rec.at("vector").get<Vector>();
      if (dimension_ == 0) dimension_ = v.size();
      if (v.size() != dimension_) {
        throw ParseError(path_.string() + ":" + std::to_string(line_no) + ": vector has wrong dimension");
      }
      cache_.emplace(rec.at("text").get<std::string>(), std::move(v));
    } catch (const json::exception& e) {
      throw ParseError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

Vector FileCacheEmbedder::embed(std::string_view text) {
  const std::string key(text);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  if (!upstream_) {
    throw EmbeddingUnavailableError("no cached embedding for '" + key + "' and no upstream provider");
  }
  Vector v = upstream_->embed(text);
  std::unique_lock lock(mutex_);
  if (auto [it, inserted] = cache_.emplace(key, v); inserted) {
    std::ofstream out(path_, std::ios::app);
    if (out) out << json{{"provider", provider_id_}, {"text", key}, {"vector", v}}.dump() << '\n';
  }
  return v;
}

std::size_t FileCacheEmbedder::cached_count() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

Vector MemoEmbedder::embed(std::string_view text) {
  const std::string key(text);
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  Vector v = inner_->embed(text);
  std::unique_lock lock(mutex_);
  memo_.emplace(key, v);
  return v;
}

}  // namespace relmap

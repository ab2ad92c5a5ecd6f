#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relmap {

using Vector = std::vector<double>;

enum class EmbeddingBackend { DeterministicLocal, RemoteService, FileCache };

/// Maps text to unit-norm vectors of a fixed dimension. Implementations are pure
/// per input text and tolerate concurrent calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const std::string& id() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual EmbeddingBackend backend() const = 0;
  /// Throws EmbeddingUnavailableError when no vector can be produced.
  virtual Vector embed(std::string_view text) = 0;
  virtual std::vector<Vector> embed_batch(std::span<const std::string> texts);
};

/// Dot product of two unit vectors. Mismatched dimensions are a logic error.
double cosine(const Vector& a, const Vector& b);

/// Signed feature hashing over words and character trigrams.
///
/// The text is normalized (lowercase, single spaces). For each space-separated
/// word w the features are "w:" + w and "c:" + g for every 3-byte window g of
/// "<" + w + ">". Each feature f is hashed with 64-bit FNV-1a whose offset basis
/// is XORed with `seed`; component h % dimension receives +1 when bit 63 of h is
/// clear and -1 otherwise. The accumulated vector is L2-normalized.
class HashedNgramEmbedder : public EmbeddingProvider {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

  explicit HashedNgramEmbedder(std::size_t dimension = 512, std::uint64_t seed = kDefaultSeed);
  const std::string& id() const override { return id_; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingBackend backend() const override { return EmbeddingBackend::DeterministicLocal; }
  Vector embed(std::string_view text) override;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
  std::string id_;
};

/// Client for the embedding sidecar: POST <url>/embed with {"texts":[...]},
/// expecting {"model": id, "dim": d, "vectors": [[...]]}.
class RemoteEmbedder : public EmbeddingProvider {
 public:
  /// `model_id` may be empty, in which case it is learned from the first response.
  RemoteEmbedder(std::string base_url, std::string model_id, std::size_t dimension,
                 std::size_t max_batch = 256);
  const std::string& id() const override { return model_id_; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingBackend backend() const override { return EmbeddingBackend::RemoteService; }
  Vector embed(std::string_view text) override;
  std::vector<Vector> embed_batch(std::span<const std::string> texts) override;

  /// GET <url>/health; returns {model, dim}. Throws EmbeddingUnavailableError.
  std::pair<std::string, std::size_t> health() const;

 private:
  std::string base_url_;
  std::string model_id_;
  std::size_t dimension_;
  std::size_t max_batch_;
};

/// Persistent cache in front of another provider (or standing alone for replay).
/// File: one {"provider": p, "text": t, "vector": [...]} per line; only entries of
/// this provider id are used. New vectors are appended as they are computed.
class FileCacheEmbedder : public EmbeddingProvider {
 public:
  /// `upstream` may be null: then misses raise EmbeddingUnavailableError.
  FileCacheEmbedder(std::filesystem::path path, std::shared_ptr<EmbeddingProvider> upstream,
                    std::string provider_id = {}, std::size_t dimension = 0);
  const std::string& id() const override { return provider_id_; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingBackend backend() const override { return EmbeddingBackend::FileCache; }
  Vector embed(std::string_view text) override;
  std::size_t cached_count() const;

 private:
  std::filesystem::path path_;
  std::shared_ptr<EmbeddingProvider> upstream_;
  std::string provider_id_;
  std::size_t dimension_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Vector> cache_;
};

/// In-memory memo around any provider; keeps the hot path of pair scoring cheap.
class MemoEmbedder : public EmbeddingProvider {
 public:
  explicit MemoEmbedder(std::shared_ptr<EmbeddingProvider> inner) : inner_(std::move(inner)) {}
  const std::string& id() const override { return inner_->id(); }
  std::size_t dimension() const override { return inner_->dimension(); }
  EmbeddingBackend backend() const override { return inner_->backend(); }
  Vector embed(std::string_view text) override;

 private:
  std::shared_ptr<EmbeddingProvider> inner_;
  std::shared_mutex mutex_;
  std::unordered_map<std::string, Vector> memo_;
};

}  // namespace relmap

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heckelab/eigenforms.hpp"

namespace heckelab {

// Bump when the table format or the numerics that produce it change.
inline constexpr int kEigenCacheVersion = 1;

/// Text cache of eigenvalue tables, one file per (weight, prime bound, version).
///
/// File layout: a header of `key value` lines, a `checksum` line (FNV-1a 64 over the body),
/// then one record per (form, p) ordered by form index and p:
///   k form p a_f(p) lambda_f(p)
/// a_f(p) is an exact integer when the space is one-dimensional, otherwise a 40-digit decimal.
class EigenCache {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  /// Uses $HECKELAB_CACHE_DIR when set, otherwise `.heckelab-cache` in the working directory.
  static std::filesystem::path default_directory();

  explicit EigenCache(std::filesystem::path directory, WarningSink warn = {});

  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path path_for(int weight, std::int64_t prime_bound) const;
  static std::string key(int weight, std::int64_t prime_bound);

  /// nullopt when the file is missing; corrupted files are reported and treated as missing.
  std::optional<std::vector<EigenForm>> load(int weight, std::int64_t prime_bound) const;
  void store(const std::vector<EigenForm>& forms) const;

  std::vector<EigenForm> load_or_compute(int weight, std::int64_t prime_bound) const;
  /// Distinct weights are computed concurrently on up to `workers` threads.
  std::map<int, std::vector<EigenForm>> load_or_compute(std::span<const int> weights, std::int64_t prime_bound,
                                                        unsigned workers = 1) const;

 private:
  void warn(const std::string& msg) const;

  std::filesystem::path dir_;
  WarningSink warn_;
};

std::string serialize_forms(const std::vector<EigenForm>& forms);
/// Throws std::runtime_error on a malformed or checksum-mismatched document.
std::vector<EigenForm> parse_forms(const std::string& text);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace heckelab

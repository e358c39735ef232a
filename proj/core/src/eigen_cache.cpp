#include "heckelab/eigen_cache.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "heckelab/arith.hpp"

namespace heckelab {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_forms(const std::vector<EigenForm>& forms) {
  if (forms.empty()) throw std::invalid_argument("serialize_forms: nothing to store");
  const auto& first = forms.front();
  std::ostringstream body;
  for (const auto& f : forms) {
    if (f.weight() != first.weight() || f.prime_bound() != first.prime_bound())
      throw std::invalid_argument("serialize_forms: forms must share weight and prime bound");
    const auto primes = f.primes();
    const auto lambdas = f.lambdas();
    for (std::size_t i = 0; i < primes.size(); ++i)
      body << f.weight() << ' ' << f.index() << ' ' << primes[i] << ' ' << f.coefficient_text(primes[i]) << ' '
           << format_double(lambdas[i]) << '\n';
  }
  const std::string b = body.str();
  std::ostringstream out;
  out << "heckelab-eigen " << kEigenCacheVersion << '\n'
      << "weight " << first.weight() << '\n'
      << "prime_bound " << first.prime_bound() << '\n'
      << "forms " << forms.size() << '\n'
      << "exact " << (first.has_exact_coefficients() ? 1 : 0) << '\n'
      << "checksum " << hex64(fnv1a64(b)) << '\n'
      << b;
  return out.str();
}

std::vector<EigenForm> parse_forms(const std::string& text) {
  std::istringstream in(text);
  auto header = [&](const char* name) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(std::string("eigen cache: missing ") + name);
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    if (key != name || value.empty()) throw std::runtime_error(std::string("eigen cache: bad header line for ") + name);
    return value;
  };
  if (std::stoi(header("heckelab-eigen")) != kEigenCacheVersion) throw std::runtime_error("eigen cache: version mismatch");
  const int weight = std::stoi(header("weight"));
  const std::int64_t bound = std::stoll(header("prime_bound"));
  const int nforms = std::stoi(header("forms"));
  const bool exact = header("exact") == "1";
  const std::string checksum = header("checksum");
  const auto body_start = static_cast<std::size_t>(in.tellg());
  const std::string_view body = std::string_view(text).substr(body_start);
  if (hex64(fnv1a64(body)) != checksum) throw std::runtime_error("eigen cache: checksum mismatch");

  auto primes = std::make_shared<const std::vector<std::int64_t>>(primes_up_to(bound));
  std::vector<EigenForm> forms;
  for (int f = 0; f < nforms; ++f) {
    std::vector<double> lambdas;
    std::vector<std::string> coeffs;
    lambdas.reserve(primes->size());
    coeffs.reserve(primes->size());
    for (auto p : *primes) {
      int k = 0, idx = 0;
      std::int64_t q = 0;
      std::string a, lam;
      if (!(in >> k >> idx >> q >> a >> lam)) throw std::runtime_error("eigen cache: truncated record list");
      if (k != weight || idx != f || q != p) throw std::runtime_error("eigen cache: records out of order");
      coeffs.push_back(std::move(a));
      lambdas.push_back(std::strtod(lam.c_str(), nullptr));
    }
    forms.emplace_back(weight, f, bound, primes, std::move(lambdas), std::move(coeffs), exact);
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("eigen cache: trailing data");
  return forms;
}

std::filesystem::path EigenCache::default_directory() {
  if (const char* env = std::getenv("HECKELAB_CACHE_DIR"); env && *env) return env;
  return ".heckelab-cache";
}

EigenCache::EigenCache(std::filesystem::path directory, WarningSink warn)
    : dir_(std::move(directory)), warn_(std::move(warn)) {}

std::string EigenCache::key(int weight, std::int64_t prime_bound) {
  return "eigen_k" + std::to_string(weight) + "_P" + std::to_string(prime_bound) + "_v" +
         std::to_string(kEigenCacheVersion);
}

std::filesystem::path EigenCache::path_for(int weight, std::int64_t prime_bound) const {
  return dir_ / (key(weight, prime_bound) + ".txt");
}

void EigenCache::warn(const std::string& msg) const {
  if (warn_) warn_(msg);
  else std::cerr << "warning: " << msg << '\n';
}

std::optional<std::vector<EigenForm>> EigenCache::load(int weight, std::int64_t prime_bound) const {
  const auto path = path_for(weight, prime_bound);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto forms = parse_forms(buf.str());
    if (forms.empty() || forms.front().weight() != weight || forms.front().prime_bound() != prime_bound)
      throw std::runtime_error("eigen cache: key does not match file contents");
    return forms;
  } catch (const std::exception& e) {
    warn(path.string() + ": " + e.what() + "; recomputing");
    return std::nullopt;
  }
}

void EigenCache::store(const std::vector<EigenForm>& forms) const {
  const std::string text = serialize_forms(forms);
  std::filesystem::create_directories(dir_);
  const auto path = path_for(forms.front().weight(), forms.front().prime_bound());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("eigen cache: cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("eigen cache: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<EigenForm> EigenCache::load_or_compute(int weight, std::int64_t prime_bound) const {
  if (auto cached = load(weight, prime_bound)) return std::move(*cached);
  auto forms = eigenforms(weight, prime_bound);
  store(forms);
  return forms;
}

std::map<int, std::vector<EigenForm>> EigenCache::load_or_compute(std::span<const int> weights,
                                                                  std::int64_t prime_bound, unsigned workers) const {
  std::vector<std::vector<EigenForm>> results(weights.size());
  std::vector<std::exception_ptr> errors(weights.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < weights.size(); i = next++) {
      try {
        results[i] = load_or_compute(weights[i], prime_bound);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(weights.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::map<int, std::vector<EigenForm>> out;
  for (std::size_t i = 0; i < weights.size(); ++i) out.emplace(weights[i], std::move(results[i]));
  return out;
}

}  // namespace heckelab

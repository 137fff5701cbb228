#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace navr1 {

// Error taxonomy. Config/user problems exit the CLI with code 1, the
// rest with code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FNV-1a over bytes; stable across platforms, used for config hashes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Worker count: NAVR1_THREADS if set, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) on worker threads. Callers get determinism by
// writing results into index i of a pre-sized buffer.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::vector<std::string> split(const std::string& s, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string trim(const std::string& s);

// Fixed-format floating point used everywhere a number reaches a file or
// stdout, so reruns are byte-identical.
std::string fmt_double(double v);
std::string fmt_fixed(double v, int digits);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);
void make_dirs(const std::string& path);

}  // namespace navr1

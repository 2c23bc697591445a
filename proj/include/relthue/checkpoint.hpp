#pragma once

// Checkpoint files: a length-prefixed stream of tagged integer-vector
// records, little endian throughout.
//
//   "RTCK"  u32 version  u32 record count
//   per record:  u32 tag length, tag bytes, u64 vector count,
//                per vector: u32 length, int64 entries
//
// Doubles (step-table logarithms) are stored by their IEEE-754 bit
// pattern so a resumed run sees exactly the same values.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relthue {

using IntRecord = std::vector<std::vector<std::int64_t>>;

class Checkpoint {
 public:
  static constexpr std::uint32_t kVersion = 1;

  void put(const std::string& tag, IntRecord record) { records_[tag] = std::move(record); }
  bool has(const std::string& tag) const { return records_.count(tag) != 0; }
  /// Throws kMissingCheckpoint when the record is absent.
  const IntRecord& get(const std::string& tag) const;
  const IntRecord* find(const std::string& tag) const;
  void erase_prefix(const std::string& prefix);
  const std::map<std::string, IntRecord>& records() const { return records_; }

  std::string serialize() const;
  static Checkpoint deserialize(const std::string& bytes);

  /// Throws kMissingCheckpoint when the file does not exist.
  static Checkpoint load(const std::string& path);
  /// Loads the file when it exists, otherwise returns an empty checkpoint.
  static Checkpoint load_or_empty(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::map<std::string, IntRecord> records_;
};

std::int64_t double_bits(double x);
double bits_double(std::int64_t bits);

}  // namespace relthue

#include "relthue/checkpoint.hpp"

#include "relthue/errors.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace relthue {
namespace {

void put_u(std::string& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : s_(bytes) {}

  std::uint64_t u(int bytes) {
    need(bytes);
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + b])) << (8 * b);
    pos_ += bytes;
    return v;
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string r = s_.substr(pos_, n);
    pos_ += n;
    return r;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  void need(std::size_t n) const {
    if (s_.size() - pos_ < n) fail(ErrorKind::kParse, "checkpoint is truncated");
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::int64_t double_bits(double x) {
  std::int64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

double bits_double(std::int64_t bits) {
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

const IntRecord& Checkpoint::get(const std::string& tag) const {
  const IntRecord* r = find(tag);
  if (!r) fail(ErrorKind::kMissingCheckpoint, "checkpoint has no record '" + tag + "'");
  return *r;
}

const IntRecord* Checkpoint::find(const std::string& tag) const {
  auto it = records_.find(tag);
  return it == records_.end() ? nullptr : &it->second;
}

void Checkpoint::erase_prefix(const std::string& prefix) {
  for (auto it = records_.begin(); it != records_.end();) {
    if (it->first.compare(0, prefix.size(), prefix) == 0) {
      it = records_.erase(it);
    } else {
      ++it;
    }
  }
}

std::string Checkpoint::serialize() const {
  std::string out = "RTCK";
  put_u(out, kVersion, 4);
  put_u(out, records_.size(), 4);
  for (const auto& [tag, rec] : records_) {
    put_u(out, tag.size(), 4);
    out += tag;
    put_u(out, rec.size(), 8);
    for (const auto& v : rec) {
      if (v.size() > 0xffffffffu) fail(ErrorKind::kCardinalityCap, "checkpoint vector too long");
      put_u(out, v.size(), 4);
      for (std::int64_t x : v) put_u(out, static_cast<std::uint64_t>(x), 8);
    }
  }
  return out;
}

Checkpoint Checkpoint::deserialize(const std::string& bytes) {
  Reader r(bytes);
  if (r.raw(4) != "RTCK") fail(ErrorKind::kParse, "not a checkpoint file");
  const auto version = r.u(4);
  if (version != kVersion) fail(ErrorKind::kParse, "unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  const auto count = r.u(4);
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::string tag = r.raw(r.u(4));
    const auto nvec = r.u(8);
    if (nvec > bytes.size()) fail(ErrorKind::kParse, "checkpoint record count is corrupt");
    IntRecord rec;
    rec.reserve(nvec);
    for (std::uint64_t i = 0; i < nvec; ++i) {
      const auto len = r.u(4);
      if (len * 8 > bytes.size()) fail(ErrorKind::kParse, "checkpoint vector length is corrupt");
      std::vector<std::int64_t> v(len);
      for (auto& x : v) x = static_cast<std::int64_t>(r.u(8));
      rec.push_back(std::move(v));
    }
    ck.records_[tag] = std::move(rec);
  }
  if (!r.done()) fail(ErrorKind::kParse, "trailing bytes after checkpoint records");
  return ck;
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kMissingCheckpoint, "checkpoint " + path + " not found");
  std::ostringstream os;
  os << in.rdbuf();
  return deserialize(os.str());
}

Checkpoint Checkpoint::load_or_empty(const std::string& path) {
  if (!std::filesystem::exists(path)) return {};
  return load(path);
}

void Checkpoint::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kInput, "cannot write checkpoint " + path);
    const std::string bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::kInput, "cannot write checkpoint " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace relthue

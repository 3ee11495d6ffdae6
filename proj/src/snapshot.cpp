#include "sophlab/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "sophlab/errors.hpp"
#include "sophlab/isa.hpp"

namespace sophlab::snapshot {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(std::string_view bytes, uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void put_u8(std::string& out, uint8_t v) {
  out.push_back(static_cast<char>(v));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) put_u8(out, static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) put_u8(out, static_cast<uint8_t>(v >> (8 * i)));
}

// Bit strings are stored as a bit count plus MSB-first packed bytes.
void put_bits(std::string& out, const Bits& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  uint8_t acc = 0;
  int used = 0;
  for (char c : s) {
    acc = static_cast<uint8_t>((acc << 1) | (c == '1' ? 1 : 0));
    if (++used == 8) {
      put_u8(out, acc);
      acc = 0;
      used = 0;
    }
  }
  if (used > 0) put_u8(out, static_cast<uint8_t>(acc << (8 - used)));
}

struct Reader {
  const std::string& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) {
      throw CorruptSnapshotError("snapshot truncated");
    }
  }
  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(bytes[pos++]);
  }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(u8()) << (8 * i);
    return v;
  }
  Bits bit_string() {
    uint32_t nbits = u32();
    if (nbits > (1u << 26)) throw CorruptSnapshotError("bit string too long");
    std::size_t nbytes = (nbits + 7) / 8;
    need(nbytes);
    Bits s;
    s.reserve(nbits);
    for (std::size_t i = 0; i < nbytes; ++i) {
      auto b = static_cast<uint8_t>(bytes[pos + i]);
      for (int bit = 7; bit >= 0 && s.size() < nbits; --bit) {
        s.push_back((b >> bit) & 1 ? '1' : '0');
      }
    }
    pos += nbytes;
    return s;
  }
};

void put_budgets(std::string& out, const Budgets& b) {
  put_u32(out, b.max_pair_bits);
  put_u32(out, b.max_program_bits);
  put_u32(out, b.max_data_bits);
  put_u64(out, b.max_steps);
  put_u32(out, b.max_string_len);
}

Budgets read_budgets(Reader& r) {
  Budgets b;
  b.max_pair_bits = r.u32();
  b.max_program_bits = r.u32();
  b.max_data_bits = r.u32();
  b.max_steps = r.u64();
  b.max_string_len = r.u32();
  return b;
}

}  // namespace

std::string serialize(const enumerate::ComplexityTable& t) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u8(out, kFormatVersion);
  put_u8(out, static_cast<uint8_t>(kIsaVersion.size()));
  out.append(kIsaVersion);
  put_budgets(out, t.budgets);
  put_bits(out, t.aux);
  put_u64(out, fnv1a(t.aux));
  put_u64(out, static_cast<uint64_t>(t.kraft.numerator()));
  put_u64(out, static_cast<uint64_t>(t.kraft.denominator()));
  auto keys = t.sorted_keys();
  put_u64(out, keys.size());
  for (const Bits* key : keys) {
    const enumerate::TableEntry& e = t.entries.at(*key);
    put_bits(out, *key);
    put_u32(out, e.k);
    put_bits(out, e.witness_program);
    put_bits(out, e.witness_data);
    put_u64(out, e.optimal_count);
    put_u32(out, static_cast<uint32_t>(e.pareto.size()));
    for (const enumerate::ParetoPoint& p : e.pareto) {
      put_u32(out, p.program_bits);
      put_u32(out, p.data_bits);
      put_bits(out, p.program);
      put_bits(out, p.data);
    }
  }
  put_u64(out, fnv1a(out));
  return out;
}

enumerate::ComplexityTable deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + 1) {
    throw CorruptSnapshotError("snapshot too short");
  }
  if (bytes.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
    throw CorruptSnapshotError("bad snapshot magic");
  }
  Reader r{bytes, sizeof(kMagic)};
  uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw VersionMismatchError("snapshot format version " +
                               std::to_string(version) + ", expected " +
                               std::to_string(kFormatVersion));
  }
  uint8_t tag_len = r.u8();
  r.need(tag_len);
  std::string tag = bytes.substr(r.pos, tag_len);
  r.pos += tag_len;
  if (tag != kIsaVersion) {
    throw VersionMismatchError("snapshot built for machine \"" + tag +
                               "\", this build is \"" +
                               std::string(kIsaVersion) + "\"");
  }

  // Integrity first: everything after this point assumes intact bytes.
  if (bytes.size() < 8) throw CorruptSnapshotError("snapshot truncated");
  std::string_view body(bytes.data(), bytes.size() - 8);
  Reader tail{bytes, bytes.size() - 8};
  if (fnv1a(body) != tail.u64()) {
    throw CorruptSnapshotError("snapshot digest mismatch");
  }

  enumerate::ComplexityTable t;
  t.budgets = read_budgets(r);
  t.aux = r.bit_string();
  uint64_t aux_digest = r.u64();
  if (aux_digest != fnv1a(t.aux)) {
    throw CorruptSnapshotError("aux digest mismatch");
  }
  auto kraft_num = static_cast<long long>(r.u64());
  auto kraft_den = static_cast<long long>(r.u64());
  if (kraft_den <= 0) throw CorruptSnapshotError("bad kraft denominator");
  t.kraft = Rational(kraft_num, kraft_den);
  uint64_t count = r.u64();
  for (uint64_t i = 0; i < count; ++i) {
    Bits key = r.bit_string();
    enumerate::TableEntry e;
    e.k = r.u32();
    e.witness_program = r.bit_string();
    e.witness_data = r.bit_string();
    e.optimal_count = r.u64();
    uint32_t npareto = r.u32();
    if (npareto > (1u << 20)) {
      throw CorruptSnapshotError("pareto list too long");
    }
    e.pareto.reserve(npareto);
    for (uint32_t j = 0; j < npareto; ++j) {
      enumerate::ParetoPoint p;
      p.program_bits = r.u32();
      p.data_bits = r.u32();
      p.program = r.bit_string();
      p.data = r.bit_string();
      e.pareto.push_back(std::move(p));
    }
    t.entries.emplace(std::move(key), std::move(e));
  }
  if (r.pos != bytes.size() - 8) {
    throw CorruptSnapshotError("snapshot has trailing bytes");
  }
  return t;
}

uint64_t table_digest(const enumerate::ComplexityTable& t) {
  return fnv1a(serialize(t));
}

uint64_t content_address(const Budgets& b, const Bits& aux) {
  std::string key;
  key.append(kIsaVersion);
  key.push_back('|');
  put_budgets(key, b);
  key.push_back('|');
  key.append(aux);
  return fnv1a(key);
}

std::string content_file_name(const Budgets& b, const Bits& aux) {
  uint64_t addr = content_address(b, aux);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "table-%016llx.pvmt",
                static_cast<unsigned long long>(addr));
  return buf;
}

void save_table(const enumerate::ComplexityTable& t,
                const std::filesystem::path& path) {
  std::string bytes = serialize(t);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move snapshot into place: " + ec.message());
}

enumerate::ComplexityTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace sophlab::snapshot

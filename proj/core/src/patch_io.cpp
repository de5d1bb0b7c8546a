#include "multitile/patch_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "multitile/errors.hpp"

namespace multitile {

namespace {

constexpr char kMagic[4] = {'M', 'T', 'P', '1'};

void put_varint(std::ostream& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.put(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.put(static_cast<char>(v));
}

int get_byte(std::istream& in) {
  const int c = in.get();
  if (c == std::char_traits<char>::eof()) throw ParseError("truncated patch file");
  return c;
}

std::uint64_t get_varint(std::istream& in) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const int c = get_byte(in);
    v |= static_cast<std::uint64_t>(c & 0x7f) << shift;
    if ((c & 0x80) == 0) return v;
  }
  throw ParseError("malformed varint in patch file");
}

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int k = 0; k < bytes; ++k) out.put(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int k = 0; k < bytes; ++k) v |= static_cast<std::uint64_t>(get_byte(in)) << (8 * k);
  return v;
}

void put_bigint(std::ostream& out, const BigInt& v) {
  out.put(static_cast<char>(sgn(v) < 0 ? 1 : 0));
  std::size_t count = 0;
  std::string bytes;
  if (sgn(v) != 0) {
    bytes.resize((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
    mpz_export(bytes.data(), &count, -1, 1, 0, 0, v.get_mpz_t());
    bytes.resize(count);
  }
  put_varint(out, bytes.size());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

BigInt get_bigint(std::istream& in) {
  const int negative = get_byte(in);
  if (negative > 1) throw ParseError("malformed integer sign in patch file");
  const std::uint64_t count = get_varint(in);
  std::string bytes(count, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(count));
  if (static_cast<std::uint64_t>(in.gcount()) != count) throw ParseError("truncated patch file");
  BigInt v;
  mpz_import(v.get_mpz_t(), count, -1, 1, 0, 0, bytes.data());
  return negative ? BigInt(-v) : v;
}

void put_rational(std::ostream& out, const Rational& r) {
  put_bigint(out, r.numerator());
  put_bigint(out, r.denominator());
}

Rational get_rational(std::istream& in) {
  BigInt num = get_bigint(in);
  BigInt den = get_bigint(in);
  if (sgn(den) <= 0) throw ParseError("non-positive denominator in patch file");
  return Rational(num, den);
}

}  // namespace

void write_patch(std::ostream& out, const Patch& patch) {
  const PatchMeta& m = patch.meta;
  out.write(kMagic, 4);
  put_le(out, m.scheme_hash, 8);
  put_le(out, m.root + 1, 2);
  put_le(out, static_cast<std::uint64_t>(m.dimension), 1);
  put_varint(out, m.scheme_name.size());
  out.write(m.scheme_name.data(), static_cast<std::streamsize>(m.scheme_name.size()));
  put_rational(out, m.time_factor);
  put_rational(out, m.frame_offset.x);
  put_rational(out, m.frame_offset.y);
  put_varint(out, patch.tiles.size());
  for (const PlacedTile& t : patch.tiles) {
    put_le(out, t.type + 1u, 2);
    put_rational(out, t.scale);
    put_rational(out, t.offset.x);
    put_rational(out, t.offset.y);
    put_varint(out, t.path.size());
    for (const std::uint16_t k : t.path) put_varint(out, k);
  }
}

Patch read_patch(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw ParseError("not a patch file (bad magic)");
  }
  Patch patch;
  PatchMeta& m = patch.meta;
  m.scheme_hash = get_le(in, 8);
  const std::uint64_t root = get_le(in, 2);
  if (root == 0) throw ParseError("patch root id must be >= 1");
  m.root = root - 1;
  m.dimension = static_cast<int>(get_le(in, 1));
  const std::uint64_t name_len = get_varint(in);
  m.scheme_name.resize(name_len);
  in.read(m.scheme_name.data(), static_cast<std::streamsize>(name_len));
  m.time_factor = get_rational(in);
  m.frame_offset.x = get_rational(in);
  m.frame_offset.y = get_rational(in);
  const std::uint64_t count = get_varint(in);
  patch.tiles.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    PlacedTile t;
    const std::uint64_t type = get_le(in, 2);
    if (type == 0) throw ParseError("tile type id must be >= 1");
    t.type = static_cast<std::uint16_t>(type - 1);
    t.scale = get_rational(in);
    t.offset.x = get_rational(in);
    t.offset.y = get_rational(in);
    const std::uint64_t depth = get_varint(in);
    t.path.reserve(depth);
    for (std::uint64_t i = 0; i < depth; ++i) t.path.push_back(static_cast<std::uint16_t>(get_varint(in)));
    patch.tiles.push_back(std::move(t));
  }
  return patch;
}

void save_patch(const std::filesystem::path& path, const Patch& patch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_patch(out, patch);
}

Patch load_patch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_patch(in);
}

std::string encode_patch(const Patch& patch) {
  std::ostringstream out(std::ios::binary);
  write_patch(out, patch);
  return std::move(out).str();
}

void write_patch_csv(std::ostream& out, const Patch& patch) {
  out << "type,scale_num,scale_den,offset_x,offset_y,depth\n";
  for (const PlacedTile& t : patch.tiles) {
    out << (t.type + 1) << ',' << t.scale.numerator().get_str() << ',' << t.scale.denominator().get_str() << ','
        << t.offset.x.str() << ',' << t.offset.y.str() << ',' << t.path.size() << '\n';
  }
}

}  // namespace multitile

#include "mosaic/zip.hpp"

#include <zlib.h>

#include <cstdint>

#include "mosaic/error.hpp"

namespace mosaic::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kStored = 0;
constexpr std::uint16_t kDeflated = 8;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

std::uint32_t u32(std::string_view b, std::size_t at) {
  if (at + 4 > b.size()) {
    throw Error(Errc::not_a_zip, "truncated record");
  }
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) {
    throw Error(Errc::not_a_zip, "truncated record");
  }
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | static_cast<unsigned char>(b[at + 1]) << 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

std::uint32_t crc_of(std::string_view data) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string inflate_raw(std::string_view in, std::size_t expected, const std::string& name) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw Error(Errc::not_a_zip, "zlib init failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) {
    throw Error(Errc::not_a_zip, "corrupt deflate data in " + name);
  }
  return out;
}

std::string deflate_raw(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, 6, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(Errc::io_error, "zlib init failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) {
    throw Error(Errc::io_error, "deflate failed");
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> read_archive(std::string_view b) {
  if (b.size() < 22) {
    throw Error(Errc::not_a_zip, "too short");
  }
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = b.size() > 22 + 0xFFFF ? b.size() - 22 - 0xFFFF : 0;
  for (std::size_t p = b.size() - 22 + 1; p-- > lowest;) {
    if (u32(b, p) == kEndSig) {
      eocd = p;
      break;
    }
  }
  if (eocd == std::string_view::npos) {
    throw Error(Errc::not_a_zip, "no end of central directory record");
  }
  const std::uint16_t count = u16(b, eocd + 10);
  std::size_t p = u32(b, eocd + 16);
  std::map<std::string, std::string> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(b, p) != kCentralSig) {
      throw Error(Errc::not_a_zip, "bad central directory entry");
    }
    const std::uint16_t method = u16(b, p + 10);
    const std::uint32_t crc = u32(b, p + 16);
    const std::uint32_t csize = u32(b, p + 20);
    const std::uint32_t usize = u32(b, p + 24);
    const std::uint16_t nlen = u16(b, p + 28);
    const std::uint16_t xlen = u16(b, p + 30);
    const std::uint16_t clen = u16(b, p + 32);
    const std::uint32_t local = u32(b, p + 42);
    if (p + 46 + nlen > b.size()) {
      throw Error(Errc::not_a_zip, "truncated entry name");
    }
    std::string name(b.substr(p + 46, nlen));
    p += 46u + nlen + xlen + clen;
    if (u32(b, local) != kLocalSig) {
      throw Error(Errc::not_a_zip, "bad local header for " + name);
    }
    const std::size_t data = local + 30u + u16(b, local + 26) + u16(b, local + 28);
    if (data + csize > b.size()) {
      throw Error(Errc::not_a_zip, "truncated data for " + name);
    }
    const std::string_view raw = b.substr(data, csize);
    std::string content;
    if (method == kStored) {
      content.assign(raw);
    } else if (method == kDeflated) {
      content = inflate_raw(raw, usize, name);
    } else {
      throw Error(Errc::not_a_zip, "unsupported compression method for " + name);
    }
    if (crc_of(content) != crc) {
      throw Error(Errc::not_a_zip, "checksum mismatch for " + name);
    }
    if (!name.empty() && name.back() != '/') {
      out.emplace(std::move(name), std::move(content));
    }
  }
  return out;
}

std::string write_archive(const std::vector<std::pair<std::string, std::string>>& entries, bool deflate) {
  std::string out;
  std::string central;
  for (const auto& [name, content] : entries) {
    const std::uint32_t crc = crc_of(content);
    const std::string packed = deflate ? deflate_raw(content) : content;
    const std::uint16_t method = deflate ? kDeflated : kStored;
    const auto offset = static_cast<std::uint32_t>(out.size());
    put32(out, kLocalSig);
    put16(out, 20);
    put16(out, 0);
    put16(out, method);
    put16(out, 0);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, static_cast<std::uint32_t>(packed.size()));
    put32(out, static_cast<std::uint32_t>(content.size()));
    put16(out, static_cast<std::uint16_t>(name.size()));
    put16(out, 0);
    out += name;
    out += packed;

    put32(central, kCentralSig);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, method);
    put16(central, 0);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, static_cast<std::uint32_t>(packed.size()));
    put32(central, static_cast<std::uint32_t>(content.size()));
    put16(central, static_cast<std::uint16_t>(name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += name;
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

}  // namespace mosaic::zip

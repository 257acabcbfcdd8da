#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nslit {

/// Fixed 9-significant-digit formatting used for all CSV numbers.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Parse an integer list: single values, comma lists and ranges
/// "a..b" / "a..b:step", e.g. "2,10,100" or "2..200:2".
inline std::vector<std::int64_t> parse_range_list(const std::string& text) {
  std::vector<std::int64_t> out;
  auto parse_int = [](const std::string& token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (...) {
      throw DomainError("parse_range_list: bad integer '" + token + "'");
    }
    if (used != token.size())
      throw DomainError("parse_range_list: bad integer '" + token + "'");
    return static_cast<std::int64_t>(v);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
    if (token.empty()) throw DomainError("parse_range_list: empty list entry");
    const std::size_t dots = token.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(token));
    } else {
      const std::string lo_text = token.substr(0, dots);
      std::string hi_text = token.substr(dots + 2);
      std::int64_t step = 1;
      if (const std::size_t colon = hi_text.find(':'); colon != std::string::npos) {
        step = parse_int(hi_text.substr(colon + 1));
        hi_text = hi_text.substr(0, colon);
      }
      const std::int64_t lo = parse_int(lo_text);
      const std::int64_t hi = parse_int(hi_text);
      if (step < 1) throw DomainError("parse_range_list: step must be >= 1");
      if (hi < lo) throw DomainError("parse_range_list: range end below start");
      if ((hi - lo) / step + 1 > 1'000'000)
        throw DomainError("parse_range_list: range expands to more than 1e6 values");
      for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
    if (pos == text.size()) throw DomainError("parse_range_list: trailing comma");
  }
  if (out.empty()) throw DomainError("parse_range_list: empty list");
  return out;
}

/// Write `content` to `target` through a temporary file plus rename, so a
/// failed run never leaves partial output behind.
inline void write_file_atomic(const std::filesystem::path& target, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  fs::create_directories(dir);

  static std::atomic<std::uint64_t> counter{0};
  const auto tick = std::chrono::steady_clock::now().time_since_epoch().count();
  const fs::path tmp = dir / (".tmp-" + target.filename().string() + "-" +
                              std::to_string(tick) + "-" + std::to_string(counter++));
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) throw Error("cannot open temporary file " + tmp.string());
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    stream.flush();
    if (!stream) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw Error("rename to " + target.string() + " failed: " + ec.message());
  }
}

}  // namespace nslit

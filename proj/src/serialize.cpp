#include "clrank/serialize.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

#include <json.hpp>

namespace clrank::io {

using nlohmann::json;

std::string format_poly(const FqPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.coeffs[i]);
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

FqPoly coeffs_from_json(const ff::FieldCtx& field, const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("LFun JSON: coefficient list expected");
  std::vector<ff::Elem> c;
  for (const auto& v : arr) {
    if (!v.is_number_unsigned() || !field.valid(v.get<ff::Elem>()))
      throw std::invalid_argument("LFun JSON: coefficient outside the field");
    c.push_back(v.get<ff::Elem>());
  }
  return poly::FqPolyRing(field).make(std::move(c));
}

}  // namespace

FqPoly parse_poly(const ff::FieldCtx& field, std::string_view text) {
  std::vector<ff::Elem> c;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size())
      throw std::invalid_argument("malformed polynomial \"" + std::string(text) + "\"");
    if (v >= field.size())
      throw std::invalid_argument("coefficient " + std::to_string(v) + " is outside F_" + std::to_string(field.size()));
    c.push_back(static_cast<ff::Elem>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return poly::FqPolyRing(field).make(std::move(c));
}

std::string lfun_to_json(const LFun& l, LFunLayout layout) {
  json out = layout == LFunLayout::Records ? json::array() : json::object();
  for (std::size_t j = 0; j < l.coeffs.size(); ++j) {
    json c = json::array();
    for (auto x : l.coeffs[j].coeffs) c.push_back(x);
    if (layout == LFunLayout::Records)
      out.push_back({{"u_deg", j}, {"coeffs_T", std::move(c)}});
    else
      out[std::to_string(j)] = std::move(c);
  }
  return out.dump();
}

LFun lfun_from_json(const ff::FieldCtx& field, std::string_view text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("LFun JSON: ") + e.what());
  }
  std::vector<FqPoly> coeffs;
  auto put = [&](std::size_t j, FqPoly c) {
    if (coeffs.size() <= j) coeffs.resize(j + 1);
    coeffs[j] = std::move(c);
  };
  if (in.is_array()) {
    for (const auto& rec : in) {
      if (!rec.is_object() || !rec.contains("u_deg") || !rec.contains("coeffs_T") || !rec["u_deg"].is_number_unsigned())
        throw std::invalid_argument("LFun JSON: record needs u_deg and coeffs_T");
      put(rec["u_deg"].get<std::size_t>(), coeffs_from_json(field, rec["coeffs_T"]));
    }
  } else if (in.is_object()) {
    for (const auto& [key, val] : in.items()) {
      std::size_t j = 0;
      const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), j);
      if (ec != std::errc{} || end != key.data() + key.size())
        throw std::invalid_argument("LFun JSON: bad U-degree key \"" + key + "\"");
      put(j, coeffs_from_json(field, val));
    }
  } else {
    throw std::invalid_argument("LFun JSON: array or object expected");
  }
  return poly::lfun_make(field, std::move(coeffs));
}

}  // namespace clrank::io

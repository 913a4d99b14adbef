#include "esmg/etc_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "esmg/sha256.hpp"

namespace esmg {

using json = nlohmann::json;  // std::map-backed: keys serialize sorted

namespace {

void put_f64_le(std::string& out, double v) {
  uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(char(uint8_t(bits >> (8 * i))));
}

double get_f64_le(const char* p) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t(uint8_t(p[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

void put_u32_le(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char(uint8_t(v >> (8 * i))));
}

json coord_array(const Eigen::ArrayXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::ArrayXd coord_from_json(const json& a) {
  Eigen::ArrayXd v(a.size());
  Eigen::Index i = 0;
  for (const auto& x : a) v[i++] = x.get<double>();
  return v;
}

json header_json(const Dataset& ds, const std::string& content_hash) {
  json dims;
  dims["time"] = ds.ntime();
  dims["lat"] = ds.grid().nlat();
  dims["lon"] = ds.grid().nlon();
  if (ds.level_pa()) dims["level"] = ds.nlevel();

  json coords;
  coords["time"] = coord_array(ds.time_s());
  coords["lat"] = coord_array(ds.grid().lat_deg());
  coords["lon"] = coord_array(ds.grid().lon_deg());
  if (ds.level_pa()) coords["level"] = coord_array(*ds.level_pa());

  json vars = json::array();
  for (const auto& f : ds.variables()) {
    json dv = json::array();
    for (Axis a : f.dims()) dv.push_back(axis_name(a));
    vars.push_back({{"name", f.name()},
                    {"dims", dv},
                    {"units", f.units()},
                    {"standard_name", f.standard_name()},
                    {"maskable", f.maskable()}});
  }

  const Provenance& p = ds.provenance;
  json prov = {{"model_id", p.model_id},
               {"model_version", p.model_version},
               {"description", p.description},
               {"code_url", p.code_url},
               {"training_data_description", p.training_data_description},
               {"content_hash", content_hash}};

  return json{{"format_version", kEtcFormatVersion},
              {"dims", dims},
              {"coords", coords},
              {"radius_m", ds.grid().radius_m()},
              {"variables", vars},
              {"attrs", ds.attrs},
              {"provenance", prov}};
}

std::string build_payload(const Dataset& ds) {
  size_t total = 0;
  for (const auto& f : ds.variables()) total += size_t(f.data().size()) * 8;
  std::string payload;
  payload.reserve(total);
  for (const auto& f : ds.variables()) {
    for (Eigen::Index i = 0; i < f.data().size(); ++i) put_f64_le(payload, f.data()[i]);
  }
  return payload;
}

}  // namespace

std::string payload_hash(const Dataset& ds) {
  const std::string payload = build_payload(ds);
  return sha256_hex(payload);
}

size_t write_dataset(const Dataset& ds, std::ostream& out) {
  // Validation happens while assembling; nothing is emitted until the full
  // byte string exists.
  const std::string payload = build_payload(ds);
  const std::string header = header_json(ds, sha256_hex(payload)).dump();

  std::string bytes;
  bytes.reserve(8 + header.size() + payload.size());
  bytes.append(kEtcMagic, 4);
  put_u32_le(bytes, uint32_t(header.size()));
  bytes.append(header);
  bytes.append(payload);

  out.write(bytes.data(), std::streamsize(bytes.size()));
  require(bool(out), errc::io_error, "failed to write dataset");
  return bytes.size();
}

size_t write_dataset(const Dataset& ds, const std::string& path) {
  if (path == "-") return write_dataset(ds, std::cout);
  std::ofstream out(path, std::ios::binary);
  require(bool(out), errc::io_error, "cannot open '" + path + "' for writing");
  const size_t n = write_dataset(ds, out);
  out.close();
  require(bool(out), errc::io_error, "failed to finish writing '" + path + "'");
  return n;
}

Dataset read_dataset(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  require(in.gcount() == 4 && std::memcmp(magic, kEtcMagic, 4) == 0, errc::format_error,
          "not an ETC1 container (bad magic)");

  char lenbuf[4];
  in.read(lenbuf, 4);
  require(in.gcount() == 4, errc::format_error, "truncated header length");
  uint32_t hlen = 0;
  for (int i = 0; i < 4; ++i) hlen |= uint32_t(uint8_t(lenbuf[i])) << (8 * i);

  std::string htext(hlen, '\0');
  in.read(htext.data(), hlen);
  require(in.gcount() == std::streamsize(hlen), errc::format_error, "truncated header");

  json h = json::parse(htext, nullptr, /*allow_exceptions=*/false);
  require(!h.is_discarded() && h.is_object(), errc::format_error, "header is not valid JSON");
  require(h.value("format_version", -1) == kEtcFormatVersion, errc::format_error,
          "unsupported format_version");

  Dataset ds = [&]() {
    try {
      const json& coords = h.at("coords");
      GridSpec grid(coord_from_json(coords.at("lat")), coord_from_json(coords.at("lon")),
                    h.value("radius_m", kEarthRadiusM));
      std::optional<Eigen::ArrayXd> level;
      if (coords.contains("level")) level = coord_from_json(coords.at("level"));
      Dataset d(std::move(grid), coord_from_json(coords.at("time")), std::move(level));

      const json& dims = h.at("dims");
      require(dims.at("lat").get<Eigen::Index>() == d.grid().nlat() &&
                  dims.at("lon").get<Eigen::Index>() == d.grid().nlon() &&
                  dims.at("time").get<Eigen::Index>() == d.ntime() &&
                  (!level || dims.at("level").get<Eigen::Index>() == d.nlevel()),
              errc::format_error, "declared dims disagree with coordinate lengths");

      for (auto& [k, v] : h.at("attrs").items()) d.attrs[k] = v.get<std::string>();
      const json& p = h.at("provenance");
      d.provenance.model_id = p.value("model_id", "");
      d.provenance.model_version = p.value("model_version", "");
      d.provenance.description = p.value("description", "");
      d.provenance.code_url = p.value("code_url", "");
      d.provenance.training_data_description = p.value("training_data_description", "");
      d.provenance.content_hash = p.value("content_hash", "");
      return d;
    } catch (const json::exception& e) {
      raise(errc::format_error, std::string("malformed header: ") + e.what());
    }
  }();

  // Payload: size is fully determined by the header.
  struct VarDecl {
    std::string name, units, standard_name;
    bool maskable;
    std::vector<Axis> dims;
    std::vector<Eigen::Index> shape;
    Eigen::Index count;
  };
  std::vector<VarDecl> decls;
  size_t payload_len = 0;
  try {
    for (const auto& v : h.at("variables")) {
      VarDecl d;
      d.name = v.at("name").get<std::string>();
      d.units = v.value("units", "");
      d.standard_name = v.value("standard_name", "");
      d.maskable = v.value("maskable", false);
      d.count = 1;
      for (const auto& dn : v.at("dims")) {
        const Axis a = axis_from_name(dn.get<std::string>());
        d.dims.push_back(a);
        const Eigen::Index s = h.at("dims").at(dn.get<std::string>()).get<Eigen::Index>();
        d.shape.push_back(s);
        d.count *= s;
      }
      payload_len += size_t(d.count) * 8;
      decls.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    raise(errc::format_error, std::string("malformed variable list: ") + e.what());
  }

  std::string payload(payload_len, '\0');
  in.read(payload.data(), std::streamsize(payload_len));
  require(size_t(in.gcount()) == payload_len, errc::corruption_error,
          "payload shorter than declared variable sizes");
  char extra;
  in.read(&extra, 1);
  require(in.gcount() == 0, errc::corruption_error, "trailing bytes after declared payload");

  const std::string actual_hash = sha256_hex(payload);
  require(actual_hash == ds.provenance.content_hash, errc::integrity_error,
          "content hash mismatch: header says " + ds.provenance.content_hash + ", payload is " +
              actual_hash);

  size_t off = 0;
  for (auto& d : decls) {
    Eigen::ArrayXd data(d.count);
    for (Eigen::Index i = 0; i < d.count; ++i) {
      data[i] = get_f64_le(payload.data() + off);
      off += 8;
    }
    ds.add(Field(d.name, std::move(d.dims), std::move(d.shape), std::move(data), d.units,
                 d.standard_name, d.maskable));
  }
  return ds;
}

Dataset read_dataset(const std::string& path) {
  if (path == "-") return read_dataset(std::cin);
  std::ifstream in(path, std::ios::binary);
  require(bool(in), errc::io_error, "cannot open '" + path + "' for reading");
  return read_dataset(in);
}

namespace {

bool arrays_bitwise_equal(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  if (a.size() != b.size()) return false;
  return a.size() == 0 ||
         std::memcmp(a.data(), b.data(), size_t(a.size()) * sizeof(double)) == 0;
}

}  // namespace

bool datasets_bit_identical(const Dataset& a, const Dataset& b) {
  if (!arrays_bitwise_equal(a.time_s(), b.time_s())) return false;
  if (a.level_pa().has_value() != b.level_pa().has_value()) return false;
  if (a.level_pa() && !arrays_bitwise_equal(*a.level_pa(), *b.level_pa())) return false;
  if (!arrays_bitwise_equal(a.grid().lat_deg(), b.grid().lat_deg())) return false;
  if (!arrays_bitwise_equal(a.grid().lon_deg(), b.grid().lon_deg())) return false;
  if (a.grid().radius_m() != b.grid().radius_m()) return false;
  if (a.attrs != b.attrs) return false;

  const Provenance &pa = a.provenance, &pb = b.provenance;
  if (pa.model_id != pb.model_id || pa.model_version != pb.model_version ||
      pa.description != pb.description || pa.code_url != pb.code_url ||
      pa.training_data_description != pb.training_data_description) {
    return false;
  }
  if (!pa.content_hash.empty() && !pb.content_hash.empty() &&
      pa.content_hash != pb.content_hash) {
    return false;
  }

  if (a.variables().size() != b.variables().size()) return false;
  for (size_t i = 0; i < a.variables().size(); ++i) {
    const Field &fa = a.variables()[i], &fb = b.variables()[i];
    if (fa.name() != fb.name() || fa.dims() != fb.dims() || fa.shape() != fb.shape() ||
        fa.units() != fb.units() || fa.standard_name() != fb.standard_name() ||
        fa.maskable() != fb.maskable() || !arrays_bitwise_equal(fa.data(), fb.data())) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> default_metadata_profile() {
  return {"units", "standard_name", "model_id"};
}

std::vector<MetadataViolation> validate_metadata(const Dataset& ds,
                                                 const std::vector<std::string>& profile) {
  std::vector<MetadataViolation> out;
  auto required = [&](const std::string& key) {
    return std::find(profile.begin(), profile.end(), key) != profile.end();
  };

  static const char* kVarKeys[] = {"units", "standard_name"};
  for (const auto& f : ds.variables()) {
    for (const char* key : kVarKeys) {
      if (!required(key)) continue;
      const std::string& val = (std::string(key) == "units") ? f.units() : f.standard_name();
      if (val.empty()) {
        out.push_back({f.name(), key, "variable '" + f.name() + "' is missing " + key});
      }
    }
  }

  const Provenance& p = ds.provenance;
  const std::pair<const char*, const std::string*> prov_keys[] = {
      {"model_id", &p.model_id},
      {"model_version", &p.model_version},
      {"description", &p.description},
      {"code_url", &p.code_url},
      {"training_data_description", &p.training_data_description}};
  for (const auto& [key, val] : prov_keys) {
    if (required(key) && val->empty()) {
      out.push_back({"provenance", key, std::string("provenance.") + key + " is empty"});
    }
  }

  for (Eigen::Index i = 1; i < ds.time_s().size(); ++i) {
    if (!(ds.time_s()[i] > ds.time_s()[i - 1])) {
      out.push_back({"time", "time",
                     "time axis not strictly increasing at index " + std::to_string(i)});
      break;
    }
  }
  if (ds.level_pa()) {
    for (Eigen::Index i = 1; i < ds.level_pa()->size(); ++i) {
      if (!((*ds.level_pa())[i] < (*ds.level_pa())[i - 1])) {
        out.push_back({"level", "level",
                       "pressure levels not strictly decreasing at index " + std::to_string(i)});
        break;
      }
    }
  }
  return out;
}

std::vector<MetadataViolation> validate_metadata(const Dataset& ds) {
  return validate_metadata(ds, default_metadata_profile());
}

}  // namespace esmg

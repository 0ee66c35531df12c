#include "mpsdfe/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpsdfe/errors.hpp"

namespace mpsdfe {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "mpsdfe-chain";
constexpr int kVersion = 1;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  detail::require(j.is_array() && j.size() == 2, "tensor entry must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json provenance_to_json(const Provenance& p) {
  json j = json::object();
  j["generator"] = p.generator;
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  j["maxBond"] = p.max_bond ? json(*p.max_bond) : json(nullptr);
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  if (!j.is_object()) return p;
  p.generator = j.value("generator", std::string{});
  if (j.contains("seed") && !j["seed"].is_null()) p.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("maxBond") && !j["maxBond"].is_null()) p.max_bond = j["maxBond"].get<int>();
  return p;
}

json parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  detail::require(doc.is_object() && doc.value("format", std::string{}) == kFormat,
                  "not an mpsdfe-chain document");
  detail::require(doc.value("version", 0) == kVersion, "unsupported mpsdfe-chain version");
  return doc;
}

json header(const char* kind, std::size_t n, const std::vector<Index>& bonds) {
  json doc = json::object();
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["kind"] = kind;
  doc["n"] = n;
  doc["bondDims"] = bonds;
  return doc;
}

void check_header(const json& doc, std::size_t sites) {
  detail::require(doc.at("n").get<std::size_t>() == sites, "site count does not match \"n\"");
}

void check_bonds(const json& doc, const std::vector<Index>& actual) {
  if (doc.contains("bondDims"))
    detail::require(doc["bondDims"].get<std::vector<Index>>() == actual,
                    "\"bondDims\" does not match the tensor shapes");
}

}  // namespace

std::string mps_to_json(const Mps& mps) {
  json doc = header("mps", mps.size(), mps.bond_dims());
  doc["canonicalForm"] =
      mps.canonical_form() == CanonicalForm::RightCanonicalCenterFirst ? "RightCanonicalCenterFirst" : "None";
  doc["provenance"] = provenance_to_json(mps.provenance());
  json sites = json::array();
  for (const auto& site : mps.sites()) {
    json t = json::array();
    for (Index l = 0; l < site[0].rows(); ++l) {
      json row = json::array();
      for (Index r = 0; r < site[0].cols(); ++r)
        row.push_back(json::array({complex_to_json(site[0](l, r)), complex_to_json(site[1](l, r))}));
      t.push_back(std::move(row));
    }
    sites.push_back(std::move(t));
  }
  doc["sites"] = std::move(sites);
  return doc.dump();
}

std::string mpo_to_json(const Mpo& mpo) {
  json doc = header("mpo", mpo.size(), mpo.bond_dims());
  doc["hermitian"] = mpo.hermitian();
  doc["provenance"] = provenance_to_json(mpo.provenance());
  json sites = json::array();
  for (const auto& site : mpo.sites()) {
    json t = json::array();
    for (Index l = 0; l < site[0].rows(); ++l) {
      json row = json::array();
      for (Index r = 0; r < site[0].cols(); ++r) {
        json phys = json::array();
        for (int out = 0; out < 2; ++out) {
          json ins = json::array();
          for (int in = 0; in < 2; ++in) ins.push_back(complex_to_json(site[mpo_slot(out, in)](l, r)));
          phys.push_back(std::move(ins));
        }
        row.push_back(std::move(phys));
      }
      t.push_back(std::move(row));
    }
    sites.push_back(std::move(t));
  }
  doc["sites"] = std::move(sites);
  return doc.dump();
}

Mps mps_from_json(std::string_view text) {
  const json doc = parse_document(text);
  detail::require(doc.value("kind", std::string{}) == "mps", "document kind is not \"mps\"");
  try {
    const auto& jsites = doc.at("sites");
    detail::require(jsites.is_array(), "\"sites\" must be an array");
    check_header(doc, jsites.size());
    std::vector<MpsSite> sites;
    for (const auto& t : jsites) {
      detail::require(t.is_array() && !t.empty() && t[0].is_array(), "MPS site must be a [left][right][2] array");
      const Index rows = static_cast<Index>(t.size());
      const Index cols = static_cast<Index>(t[0].size());
      MpsSite site{Matrix(rows, cols), Matrix(rows, cols)};
      for (Index l = 0; l < rows; ++l) {
        detail::require(t[l].size() == static_cast<std::size_t>(cols), "ragged MPS site tensor");
        for (Index r = 0; r < cols; ++r) {
          const auto& phys = t[l][r];
          detail::require(phys.is_array() && phys.size() == 2, "MPS physical dimension must be 2");
          site[0](l, r) = complex_from_json(phys[0]);
          site[1](l, r) = complex_from_json(phys[1]);
        }
      }
      sites.push_back(std::move(site));
    }
    const std::string form = doc.value("canonicalForm", std::string("None"));
    detail::require(form == "None" || form == "RightCanonicalCenterFirst", "unknown canonicalForm");
    Mps mps(std::move(sites),
            form == "None" ? CanonicalForm::None : CanonicalForm::RightCanonicalCenterFirst,
            provenance_from_json(doc.value("provenance", json::object())));
    check_bonds(doc, mps.bond_dims());
    return mps;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed MPS document: ") + e.what());
  }
}

Mpo mpo_from_json(std::string_view text) {
  const json doc = parse_document(text);
  detail::require(doc.value("kind", std::string{}) == "mpo", "document kind is not \"mpo\"");
  try {
    const auto& jsites = doc.at("sites");
    detail::require(jsites.is_array(), "\"sites\" must be an array");
    check_header(doc, jsites.size());
    std::vector<MpoSite> sites;
    for (const auto& t : jsites) {
      detail::require(t.is_array() && !t.empty() && t[0].is_array(),
                      "MPO site must be a [left][right][2][2] array");
      const Index rows = static_cast<Index>(t.size());
      const Index cols = static_cast<Index>(t[0].size());
      MpoSite site;
      for (auto& s : site) s.resize(rows, cols);
      for (Index l = 0; l < rows; ++l) {
        detail::require(t[l].size() == static_cast<std::size_t>(cols), "ragged MPO site tensor");
        for (Index r = 0; r < cols; ++r) {
          const auto& phys = t[l][r];
          detail::require(phys.is_array() && phys.size() == 2, "MPO physical dimension must be 2x2");
          for (int out = 0; out < 2; ++out) {
            detail::require(phys[out].is_array() && phys[out].size() == 2, "MPO physical dimension must be 2x2");
            for (int in = 0; in < 2; ++in) site[mpo_slot(out, in)](l, r) = complex_from_json(phys[out][in]);
          }
        }
      }
      sites.push_back(std::move(site));
    }
    Mpo mpo(std::move(sites), doc.value("hermitian", false),
            provenance_from_json(doc.value("provenance", json::object())));
    check_bonds(doc, mpo.bond_dims());
    return mpo;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed MPO document: ") + e.what());
  }
}

ChainKind chain_kind_of(std::string_view text) {
  const json doc = parse_document(text);
  const std::string kind = doc.value("kind", std::string{});
  if (kind == "mps") return ChainKind::Mps;
  if (kind == "mpo") return ChainKind::Mpo;
  throw ValidationError("unknown chain kind \"" + kind + "\"");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

void save_mps(const Mps& mps, const std::filesystem::path& path) { write_text_file(path, mps_to_json(mps) + "\n"); }
void save_mpo(const Mpo& mpo, const std::filesystem::path& path) { write_text_file(path, mpo_to_json(mpo) + "\n"); }
Mps load_mps(const std::filesystem::path& path) { return mps_from_json(read_text_file(path)); }
Mpo load_mpo(const std::filesystem::path& path) { return mpo_from_json(read_text_file(path)); }
ChainKind peek_chain_kind(const std::filesystem::path& path) { return chain_kind_of(read_text_file(path)); }

}  // namespace mpsdfe

#include "mpsdfe/records.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "mpsdfe/errors.hpp"

namespace mpsdfe {

namespace {

using nlohmann::json;

json parse_line(std::string_view line, std::size_t number) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError("line " + std::to_string(number) + ": malformed JSON: " + e.what());
  }
}

std::vector<json> parse_lines(std::string_view text) {
  std::vector<json> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse_line(line, number));
    pos = end + 1;
  }
  return out;
}

json optional_u64(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string plan_to_jsonl(const Plan& plan) {
  std::ostringstream out;
  json header = {{"type", "plan"},
                 {"method", to_string(plan.method)},
                 {"target", to_string(plan.target)},
                 {"n", plan.n},
                 {"seed", plan.seed},
                 {"eps", plan.params.eps},
                 {"delta", plan.params.delta},
                 {"l", plan.params.settings},
                 {"sortingPolicy", to_string(plan.sorting_policy)},
                 {"shotCap", optional_u64(plan.shot_cap)}};
  out << header.dump() << '\n';
  for (const auto& s : plan.settings) {
    json line = {{"type", "setting"},
                 {"index", s.latent.index},
                 {"pauli", s.latent.pauli.str()},
                 {"chi", s.latent.chi},
                 {"weight", s.latent.weight},
                 {"Z", s.latent.normalization},
                 {"streamKey", s.latent.stream_key},
                 {"sorting", s.sorting.str()},
                 {"representative", s.representative.str()},
                 {"groupExponent", s.group_exponent},
                 {"groupSize", s.group_size()},
                 {"groupWeight", s.group_weight},
                 {"shotBudget", s.budget.shots},
                 {"capped", s.budget.capped}};
    out << line.dump() << '\n';
  }
  return out.str();
}

Plan plan_from_jsonl(std::string_view text) {
  const auto lines = parse_lines(text);
  detail::require(!lines.empty() && lines.front().value("type", std::string{}) == "plan",
                  "settings file must start with a plan header line");
  Plan plan;
  try {
    const auto& h = lines.front();
    plan.method = method_from_string(h.at("method").get<std::string>());
    const std::string target = h.at("target").get<std::string>();
    detail::require(target == "mps" || target == "mpo", "unknown target kind \"" + target + "\"");
    plan.target = target == "mps" ? TargetKind::Mps : TargetKind::Mpo;
    plan.n = h.at("n").get<std::size_t>();
    plan.seed = h.at("seed").get<std::uint64_t>();
    plan.params = PrecisionParams::from(h.at("eps").get<double>(), h.at("delta").get<double>(),
                                        h.at("l").get<std::size_t>());
    plan.sorting_policy = sorting_policy_from_string(h.at("sortingPolicy").get<std::string>());
    if (h.contains("shotCap") && !h["shotCap"].is_null()) plan.shot_cap = h["shotCap"].get<std::uint64_t>();
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto& j = lines[k];
      detail::require(j.value("type", std::string{}) == "setting", "expected a setting line");
      GroupedSetting s;
      s.latent.index = j.at("index").get<std::size_t>();
      s.latent.pauli = PauliString::parse(j.at("pauli").get<std::string>());
      s.latent.chi = j.at("chi").get<double>();
      s.latent.weight = j.at("weight").get<double>();
      s.latent.normalization = j.value("Z", 1.0);
      s.latent.stream_key = j.value("streamKey", std::uint64_t{0});
      const std::string sorting = j.value("sorting", std::string{});
      if (!sorting.empty()) s.sorting = SortingString::parse(sorting);
      s.representative = PauliString::parse(j.at("representative").get<std::string>());
      s.group_exponent = j.at("groupExponent").get<unsigned>();
      s.group_weight = j.at("groupWeight").get<double>();
      s.budget.shots = j.at("shotBudget").get<std::uint64_t>();
      s.budget.capped = j.value("capped", false);
      detail::require(s.latent.pauli.size() == plan.n && s.representative.size() == plan.n,
                      "setting length does not match n");
      detail::require(plan.method == Method::Dfe || s.sorting.size() == plan.n,
                      "grouped settings need a sorting string");
      plan.settings.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed settings file: ") + e.what());
  }
  detail::require(plan.settings.size() == plan.params.settings, "settings file holds fewer settings than l");
  return plan;
}

std::string records_to_jsonl(const Plan& plan, const MeasurementData& data, RecordStyle style) {
  detail::require(data.size() == plan.settings.size(), "records do not cover every setting");
  std::ostringstream out;
  for (std::size_t j = 0; j < data.size(); ++j) {
    json line = {{"settingIndex", plan.settings[j].latent.index},
                 {"setting", plan.settings[j].representative.str()},
                 {"shots", total_shots(data[j])}};
    if (style == RecordStyle::Signs) {
      json signs = json::array();
      for (const auto& o : data[j]) {
        const std::string str = o.signs.str();
        for (std::uint64_t k = 0; k < o.count; ++k) signs.push_back(str);
      }
      line["signs"] = std::move(signs);
    } else {
      json counts = json::object();
      for (const auto& o : data[j]) counts[o.signs.str()] = o.count;
      line["counts"] = std::move(counts);
    }
    out << line.dump() << '\n';
  }
  return out.str();
}

MeasurementData records_from_jsonl(std::string_view text, const Plan& plan) {
  const auto lines = parse_lines(text);
  MeasurementData data(plan.settings.size());
  std::vector<bool> seen(plan.settings.size(), false);
  try {
    for (const auto& j : lines) {
      const std::size_t index = j.at("settingIndex").get<std::size_t>();
      detail::require(index < plan.settings.size(), "record refers to unknown setting " + std::to_string(index));
      detail::require(!seen[index], "duplicate record for setting " + std::to_string(index));
      seen[index] = true;
      detail::require(j.at("setting").get<std::string>() == plan.settings[index].representative.str(),
                      "record setting does not match the plan for setting " + std::to_string(index));
      std::vector<SignVector> shots;
      if (j.contains("signs")) {
        for (const auto& s : j["signs"]) shots.push_back(SignVector::parse(s.get<std::string>()));
        data[index] = make_histogram(shots);
      } else {
        detail::require(j.contains("counts"), "record needs \"signs\" or \"counts\"");
        OutcomeHistogram hist;
        for (const auto& [key, value] : j["counts"].items()) {
          const auto count = value.get<std::uint64_t>();
          if (count > 0) hist.push_back({SignVector::parse(key), count});
        }
        std::sort(hist.begin(), hist.end(), [](const auto& a, const auto& b) { return a.signs < b.signs; });
        data[index] = std::move(hist);
      }
      for (const auto& o : data[index])
        detail::require(o.signs.size() == plan.n, "sign vector length does not match n");
      if (j.contains("shots"))
        detail::require(j["shots"].get<std::uint64_t>() == total_shots(data[index]),
                        "\"shots\" disagrees with the recorded outcomes");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed records file: ") + e.what());
  }
  for (std::size_t k = 0; k < seen.size(); ++k)
    detail::require(seen[k], "no record for setting " + std::to_string(k));
  return data;
}

std::string report_to_json(const EstimationReport& r) {
  json settings = json::array();
  for (const auto& s : r.settings) settings.push_back({{"index", s.index}, {"shots", s.shots}, {"estimator", s.value}});
  json doc = {{"method", to_string(r.method)},
              {"target", to_string(r.target)},
              {"n", r.n},
              {"seed", r.seed},
              {"eps", r.params.eps},
              {"delta", r.params.delta},
              {"l", r.params.settings},
              {"sortingPolicy", to_string(r.sorting_policy)},
              {"shotCap", optional_u64(r.shot_cap)},
              {"Z", r.normalization},
              {"estimate", r.estimate},
              {"variance", r.variance},
              {"standardError", r.std_error},
              {"totalShots", r.total_shots},
              {"biased", r.biased},
              {"settings", std::move(settings)}};
  return doc.dump(2) + "\n";
}

std::string timings_to_json(const PhaseTimings& t) {
  json doc = {{"samplingSeconds", t.sampling_seconds},
              {"probabilitySeconds", t.probability_seconds},
              {"onlineSeconds", t.online_seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace mpsdfe

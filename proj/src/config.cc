// Copyright 2026 The selftag Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selftag/config.h"

#include <algorithm>
#include <charconv>

#include "selftag/error.h"

namespace selftag {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string FormatReal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "bad value '" + std::string(text) + "' for key '" +
                    std::string(key) + "'");
  }
  return value;
}

std::string JoinPolicies(const std::vector<SelectionPolicy>& policies) {
  std::string out;
  for (const auto& p : policies) {
    if (!out.empty()) out += ", ";
    out += p.ToString();
  }
  return out;
}

template <typename T, typename F>
std::string Join(const std::vector<T>& values, F format) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    out += format(v);
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(std::string_view text) {
  KeyValueConfig kv;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = Trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(line_no) + ": empty key");
    }
    kv.values_[std::string(key)] = std::string(Trim(line.substr(eq + 1)));
  }
  return kv;
}

bool KeyValueConfig::Has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

std::string KeyValueConfig::GetString(std::string_view key,
                                      std::string fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  read_.insert(std::string(key));
  return it->second;
}

int64_t KeyValueConfig::GetInt(std::string_view key, int64_t fallback) const {
  if (!Has(key)) return fallback;
  return ParseNumber<int64_t>(key, GetString(key, ""));
}

double KeyValueConfig::GetDouble(std::string_view key, double fallback) const {
  if (!Has(key)) return fallback;
  return ParseNumber<double>(key, GetString(key, ""));
}

bool KeyValueConfig::GetBool(std::string_view key, bool fallback) const {
  if (!Has(key)) return fallback;
  std::string v = GetString(key, "");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::kInvalidConfig,
              "bad boolean '" + v + "' for key '" + std::string(key) + "'");
}

std::vector<std::string> KeyValueConfig::GetList(
    std::string_view key, std::vector<std::string> fallback) const {
  if (!Has(key)) return fallback;
  std::string v = GetString(key, "");
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= v.size()) {
    size_t comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    std::string_view item = Trim(std::string_view(v).substr(pos, comma - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> KeyValueConfig::UnreadKeys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (!read_.contains(key)) out.push_back(key);
  }
  return out;
}

ExperimentConfig ExperimentConfig::Defaults() {
  ExperimentConfig c;
  c.grid = {SelectionPolicy::Threshold(0.80), SelectionPolicy::Threshold(0.90),
            SelectionPolicy::Threshold(0.95), SelectionPolicy::FixedSize(50),
            SelectionPolicy::FixedSize(100), SelectionPolicy::FixedSize(200)};
  c.gold_fractions = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  c.ablation_taus = {0.80, 0.90, 0.95};
  c.seeds = {0, 1, 2, 3, 4};
  return c;
}

ExperimentConfig ExperimentConfig::FromKeyValue(const KeyValueConfig& kv) {
  ExperimentConfig c = Defaults();
  const int64_t version = kv.GetInt("config_version", kConfigVersion);
  if (version != kConfigVersion) {
    throw Error(ErrorCode::kInvalidConfig,
                "unsupported config_version " + std::to_string(version));
  }
  const std::string task = kv.GetString("task", "ner");
  if (task == "ner") {
    c.task = SchemeKind::kBioEntity;
  } else if (task == "pos") {
    c.task = SchemeKind::kFlatPos;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "task must be ner or pos");
  }
  const std::string data = kv.GetString("data", "synthetic");
  if (data != "synthetic" && data != "files") {
    throw Error(ErrorCode::kInvalidConfig, "data must be synthetic or files");
  }
  c.synthetic_data = data == "synthetic";
  c.output_dir = kv.GetString("output_dir", c.output_dir);

  auto& s = c.synthetic;
  s.scheme = c.task;
  s.lexicon_size = static_cast<int>(kv.GetInt("synthetic.lexicon_size", s.lexicon_size));
  s.shift_rate = kv.GetDouble("synthetic.shift_rate", s.shift_rate);
  s.labeled = static_cast<int>(kv.GetInt("synthetic.labeled", s.labeled));
  s.unlabeled = static_cast<int>(kv.GetInt("synthetic.unlabeled", s.unlabeled));
  s.dev = static_cast<int>(kv.GetInt("synthetic.dev", s.dev));
  s.test = static_cast<int>(kv.GetInt("synthetic.test", s.test));
  s.gold = static_cast<int>(kv.GetInt("synthetic.gold", s.gold));
  s.label_noise = kv.GetDouble("synthetic.label_noise", s.label_noise);
  s.seed = static_cast<uint64_t>(kv.GetInt("synthetic.seed", 0));

  auto& f = c.files;
  f.train = kv.GetString("files.train", "");
  f.unlabeled = kv.GetString("files.unlabeled", "");
  f.source_unlabeled = kv.GetString("files.source_unlabeled", "");
  f.source_dev = kv.GetString("files.source_dev", "");
  f.source_test = kv.GetString("files.source_test", "");
  f.target_dev = kv.GetString("files.target_dev", "");
  f.target_test = kv.GetString("files.target_test", "");
  f.target_gold = kv.GetString("files.target_gold", "");

  if (kv.Has("grid")) {
    c.grid.clear();
    for (const auto& item : kv.GetList("grid", {})) {
      c.grid.push_back(SelectionPolicy::Parse(item));
    }
  }
  if (kv.Has("selection.kind")) {
    const std::string kind = kv.GetString("selection.kind", "");
    if (kind == "threshold") {
      c.selection = SelectionPolicy::Threshold(kv.GetDouble("selection.tau", 0.90));
    } else if (kind == "fixed") {
      c.selection = SelectionPolicy::FixedSize(
          static_cast<int>(kv.GetInt("selection.s", 100)));
    } else {
      throw Error(ErrorCode::kInvalidConfig, "selection.kind must be threshold or fixed");
    }
  }
  if (kv.Has("fewshot.policy")) {
    c.few_shot_policy = SelectionPolicy::Parse(kv.GetString("fewshot.policy", ""));
  }
  if (kv.Has("gold_fractions")) {
    c.gold_fractions.clear();
    for (const auto& item : kv.GetList("gold_fractions", {})) {
      c.gold_fractions.push_back(ParseNumber<double>("gold_fractions", item));
    }
  }
  if (kv.Has("ablation.taus")) {
    c.ablation_taus.clear();
    for (const auto& item : kv.GetList("ablation.taus", {})) {
      c.ablation_taus.push_back(ParseNumber<double>("ablation.taus", item));
    }
  }
  if (kv.Has("seeds")) {
    c.seeds.clear();
    for (const auto& item : kv.GetList("seeds", {})) {
      c.seeds.push_back(ParseNumber<uint64_t>("seeds", item));
    }
  }

  auto& st = c.self_train;
  st.policy = c.selection;
  st.epochs_per_iteration = static_cast<int>(
      kv.GetInt("selftrain.epochs_per_iteration", st.epochs_per_iteration));
  st.patience = static_cast<int>(kv.GetInt("selftrain.patience", st.patience));
  st.max_iterations =
      static_cast<int>(kv.GetInt("selftrain.max_iterations", st.max_iterations));
  st.reinit_each_iteration =
      kv.GetBool("selftrain.reinit_each_iteration", st.reinit_each_iteration);
  st.tagger.learning_rate = kv.GetDouble("tagger.learning_rate", st.tagger.learning_rate);
  st.tagger.l2 = kv.GetDouble("tagger.l2", st.tagger.l2);
  st.tagger.batch_size =
      static_cast<int>(kv.GetInt("tagger.batch_size", st.tagger.batch_size));
  st.tagger.patience = static_cast<int>(kv.GetInt("tagger.patience", st.tagger.patience));
  if (kv.Has("tagger.templates")) {
    st.templates = ParseTemplates(kv.GetString("tagger.templates", ""));
  }

  auto unread = kv.UnreadKeys();
  // selection.tau / selection.s are legitimately unread for the other kind.
  std::erase_if(unread, [](const std::string& k) {
    return k == "selection.tau" || k == "selection.s";
  });
  if (!unread.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + unread[0] + "'");
  }
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::FromText(std::string_view text) {
  return FromKeyValue(KeyValueConfig::Parse(text));
}

void ExperimentConfig::Validate() const {
  if (grid.empty()) throw Error(ErrorCode::kInvalidConfig, "grid is empty");
  if (gold_fractions.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "gold_fractions is empty");
  }
  for (size_t i = 0; i < gold_fractions.size(); ++i) {
    const double fr = gold_fractions[i];
    if (!(fr >= 0.0 && fr <= 1.0) || (i > 0 && fr < gold_fractions[i - 1])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "gold_fractions must lie in [0, 1] and ascend");
    }
  }
  if (ablation_taus.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "ablation.taus is empty");
  }
  for (double tau : ablation_taus) SelectionPolicy::Threshold(tau);
  if (seeds.empty()) throw Error(ErrorCode::kInvalidConfig, "seeds is empty");
  if (!synthetic_data && files.train.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "data = files needs files.train");
  }
  if (synthetic_data) synthetic.Validate();
  self_train.Validate();
}

std::string ExperimentConfig::ToText() const {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("config_version", std::to_string(kConfigVersion));
  put("task", task == SchemeKind::kBioEntity ? "ner" : "pos");
  put("data", synthetic_data ? "synthetic" : "files");
  put("output_dir", output_dir);
  put("synthetic.lexicon_size", std::to_string(synthetic.lexicon_size));
  put("synthetic.shift_rate", FormatReal(synthetic.shift_rate));
  put("synthetic.labeled", std::to_string(synthetic.labeled));
  put("synthetic.unlabeled", std::to_string(synthetic.unlabeled));
  put("synthetic.dev", std::to_string(synthetic.dev));
  put("synthetic.test", std::to_string(synthetic.test));
  put("synthetic.gold", std::to_string(synthetic.gold));
  put("synthetic.label_noise", FormatReal(synthetic.label_noise));
  put("synthetic.seed", std::to_string(synthetic.seed));
  const std::pair<const char*, const std::string*> file_keys[] = {
      {"files.train", &files.train},
      {"files.unlabeled", &files.unlabeled},
      {"files.source_unlabeled", &files.source_unlabeled},
      {"files.source_dev", &files.source_dev},
      {"files.source_test", &files.source_test},
      {"files.target_dev", &files.target_dev},
      {"files.target_test", &files.target_test},
      {"files.target_gold", &files.target_gold}};
  for (const auto& [key, value] : file_keys) {
    if (!value->empty()) put(key, *value);
  }
  put("grid", JoinPolicies(grid));
  if (selection.kind() == SelectionPolicy::Kind::kThreshold) {
    put("selection.kind", "threshold");
    put("selection.tau", FormatReal(selection.tau()));
  } else {
    put("selection.kind", "fixed");
    put("selection.s", std::to_string(selection.s()));
  }
  put("fewshot.policy", few_shot_policy.ToString());
  put("gold_fractions", Join(gold_fractions, FormatReal));
  put("ablation.taus", Join(ablation_taus, FormatReal));
  put("seeds", Join(seeds, [](uint64_t s) { return std::to_string(s); }));
  put("selftrain.epochs_per_iteration", std::to_string(self_train.epochs_per_iteration));
  put("selftrain.patience", std::to_string(self_train.patience));
  put("selftrain.max_iterations", std::to_string(self_train.max_iterations));
  put("selftrain.reinit_each_iteration",
      self_train.reinit_each_iteration ? "true" : "false");
  put("tagger.learning_rate", FormatReal(self_train.tagger.learning_rate));
  put("tagger.l2", FormatReal(self_train.tagger.l2));
  put("tagger.batch_size", std::to_string(self_train.tagger.batch_size));
  put("tagger.patience", std::to_string(self_train.tagger.patience));
  put("tagger.templates", TemplatesToString(self_train.templates));
  return out;
}

}  // namespace selftag

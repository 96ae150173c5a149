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

#include "selftag/features.h"

#include <charconv>

#include "selftag/error.h"

namespace selftag {
namespace {

// Byte offsets of every UTF-8 code point start, plus the end offset.
std::vector<size_t> CodePointStarts(std::string_view s) {
  std::vector<size_t> starts;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  starts.push_back(s.size());
  return starts;
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) ||
         (c >= 91 && c <= 96) || (c >= 123 && c <= 126);
}

// ASCII digits and Arabic-Indic digits (U+0660..U+0669, UTF-8 D9 A0..D9 A9).
bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (size_t i = 0; i < s.size();) {
    unsigned char c = s[i];
    if (c >= '0' && c <= '9') {
      ++i;
    } else if (c == 0xD9 && i + 1 < s.size() &&
               static_cast<unsigned char>(s[i + 1]) >= 0xA0 &&
               static_cast<unsigned char>(s[i + 1]) <= 0xA9) {
      i += 2;
    } else {
      return false;
    }
  }
  return true;
}

bool AllPunct(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!IsAsciiPunct(c)) return false;
  }
  return true;
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

int ParseSignedInt(std::string_view text, std::string_view id) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidTemplate,
                "bad template id '" + std::string(id) + "'");
  }
  return value;
}

bool Consume(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

}  // namespace

std::string FeatureTemplate::Id() const {
  const std::string off = std::to_string(offset);
  switch (kind) {
    case TemplateKind::kWord: return "w" + off;
    case TemplateKind::kLowercase: return "lw" + off;
    case TemplateKind::kPrefix:
    case TemplateKind::kSuffix: {
      std::string id = kind == TemplateKind::kPrefix ? "pre" : "suf";
      id += std::to_string(affix_length);
      if (offset != 0) id += "@" + off;
      return id;
    }
    case TemplateKind::kShape: return "shape" + off;
    case TemplateKind::kDigit: return "digit" + off;
    case TemplateKind::kPunct: return "punct" + off;
    case TemplateKind::kLabelBigram: return "bigram";
  }
  return "?";
}

FeatureTemplate FeatureTemplate::Parse(std::string_view id) {
  std::string_view rest = id;
  FeatureTemplate t;
  if (rest == "bigram") {
    t.kind = TemplateKind::kLabelBigram;
    return t;
  }
  if (Consume(rest, "pre") || Consume(rest, "suf")) {
    t.kind = id[0] == 'p' ? TemplateKind::kPrefix : TemplateKind::kSuffix;
    if (rest.empty() || rest[0] < '1' || rest[0] > '4') {
      throw Error(ErrorCode::kInvalidTemplate,
                  "affix length must be 1..4 in '" + std::string(id) + "'");
    }
    t.affix_length = rest[0] - '0';
    rest.remove_prefix(1);
    if (!rest.empty()) {
      if (!Consume(rest, "@")) {
        throw Error(ErrorCode::kInvalidTemplate,
                    "bad template id '" + std::string(id) + "'");
      }
      t.offset = ParseSignedInt(rest, id);
    }
    return t;
  }
  if (Consume(rest, "lw")) {
    t.kind = TemplateKind::kLowercase;
  } else if (Consume(rest, "w")) {
    t.kind = TemplateKind::kWord;
  } else if (Consume(rest, "shape")) {
    t.kind = TemplateKind::kShape;
  } else if (Consume(rest, "digit")) {
    t.kind = TemplateKind::kDigit;
  } else if (Consume(rest, "punct")) {
    t.kind = TemplateKind::kPunct;
  } else {
    throw Error(ErrorCode::kInvalidTemplate,
                "unknown template '" + std::string(id) + "'");
  }
  t.offset = ParseSignedInt(rest, id);
  return t;
}

std::vector<FeatureTemplate> DefaultTemplates() {
  return ParseTemplates(
      "w-2,w-1,w0,w1,w2,lw0,pre2,pre3,suf2,suf3,shape-1,shape0,shape1,"
      "digit0,punct0,bigram");
}

std::vector<FeatureTemplate> ParseTemplates(std::string_view comma_separated) {
  std::vector<FeatureTemplate> out;
  size_t pos = 0;
  while (pos <= comma_separated.size()) {
    size_t comma = comma_separated.find(',', pos);
    if (comma == std::string_view::npos) comma = comma_separated.size();
    std::string_view item = comma_separated.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      FeatureTemplate t = FeatureTemplate::Parse(item);
      for (const auto& existing : out) {
        if (existing == t) {
          throw Error(ErrorCode::kInvalidTemplate,
                      "duplicate template '" + std::string(item) + "'");
        }
      }
      out.push_back(t);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidTemplate, "empty template set");
  return out;
}

std::string TemplatesToString(std::span<const FeatureTemplate> templates) {
  std::string out;
  for (const auto& t : templates) {
    if (!out.empty()) out += ',';
    out += t.Id();
  }
  return out;
}

bool HasLabelBigram(std::span<const FeatureTemplate> templates) {
  for (const auto& t : templates) {
    if (t.kind == TemplateKind::kLabelBigram) return true;
  }
  return false;
}

std::string WordShape(std::string_view token) {
  std::string shape;
  auto starts = CodePointStarts(token);
  for (size_t i = 0; i + 1 < starts.size(); ++i) {
    unsigned char c = token[starts[i]];
    char cls;
    if (c >= 'A' && c <= 'Z') {
      cls = 'X';
    } else if (c >= 'a' && c <= 'z') {
      cls = 'x';
    } else if (c >= '0' && c <= '9') {
      cls = 'd';
    } else if (c < 0x80) {
      cls = static_cast<char>(c);
    } else {
      cls = 'u';  // any non-ASCII code point
    }
    if (shape.empty() || shape.back() != cls) shape += cls;
  }
  return shape;
}

std::vector<std::string> ExtractFeatures(std::span<const std::string> tokens,
                                         int position,
                                         std::span<const FeatureTemplate> templates) {
  std::vector<std::string> feats;
  feats.reserve(templates.size());
  const int n = static_cast<int>(tokens.size());
  for (const auto& t : templates) {
    if (t.kind == TemplateKind::kLabelBigram) continue;
    std::string name = t.Id() + "=";
    const int at = position + t.offset;
    if (at < 0) {
      feats.push_back(name + "<BOS>");
      continue;
    }
    if (at >= n) {
      feats.push_back(name + "<EOS>");
      continue;
    }
    const std::string& tok = tokens[at];
    switch (t.kind) {
      case TemplateKind::kWord:
        feats.push_back(name + tok);
        break;
      case TemplateKind::kLowercase:
        feats.push_back(name + Lowercase(tok));
        break;
      case TemplateKind::kPrefix:
      case TemplateKind::kSuffix: {
        auto starts = CodePointStarts(tok);
        const size_t cps = starts.size() - 1;
        const size_t k = std::min<size_t>(t.affix_length, cps);
        if (t.kind == TemplateKind::kPrefix) {
          feats.push_back(name + tok.substr(0, starts[k]));
        } else {
          feats.push_back(name + tok.substr(starts[cps - k]));
        }
        break;
      }
      case TemplateKind::kShape:
        feats.push_back(name + WordShape(tok));
        break;
      case TemplateKind::kDigit:
        if (AllDigits(tok)) feats.push_back(name + "1");
        break;
      case TemplateKind::kPunct:
        if (AllPunct(tok)) feats.push_back(name + "1");
        break;
      case TemplateKind::kLabelBigram:
        break;
    }
  }
  return feats;
}

}  // namespace selftag

#include "gene_atlas/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace gene_atlas::text {
namespace {

icu::UnicodeString from_utf8(std::string_view utf8) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString nfc_unicode(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = normalizer->normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  return out;
}

icu::UnicodeString collapse(const icu::UnicodeString& s) {
  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(UChar32(' '));
    pending_space = false;
    out.append(c);
  }
  return out;
}

bool is_cjk(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(c, &status);
  if (U_FAILURE(status)) return false;
  return script == USCRIPT_HAN || script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA ||
         script == USCRIPT_HANGUL;
}

bool is_word_char(UChar32 c) {
  return u_isalnum(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

struct Run {
  std::string text;
  std::vector<std::string> cjk;
  bool all_cjk = true;
};

std::vector<Run> word_runs(std::string_view utf8) {
  const icu::UnicodeString lowered = nfc_unicode(from_utf8(utf8)).toLower(icu::Locale::getRoot());
  std::vector<Run> runs;
  Run current;
  bool open = false;
  for (int32_t i = 0; i < lowered.length();) {
    const UChar32 c = lowered.char32At(i);
    i += U16_LENGTH(c);
    if (!is_word_char(c)) {
      if (open) runs.push_back(std::move(current));
      current = Run{};
      open = false;
      continue;
    }
    open = true;
    const std::string piece = to_utf8(icu::UnicodeString(c));
    current.text += piece;
    if (is_cjk(c)) {
      current.cjk.push_back(piece);
    } else {
      current.all_cjk = false;
    }
  }
  if (open) runs.push_back(std::move(current));
  return runs;
}

}  // namespace

std::string nfc(std::string_view utf8) { return to_utf8(nfc_unicode(from_utf8(utf8))); }

std::string collapse_whitespace(std::string_view utf8) { return to_utf8(collapse(from_utf8(utf8))); }

std::string normalize_narrative(std::string_view utf8) {
  return to_utf8(collapse(nfc_unicode(from_utf8(utf8))));
}

std::string fold_case(std::string_view utf8) {
  return to_utf8(nfc_unicode(from_utf8(utf8)).foldCase());
}

std::string to_lower(std::string_view utf8) {
  return to_utf8(from_utf8(utf8).toLower(icu::Locale::getRoot()));
}

std::size_t codepoint_count(std::string_view utf8) {
  const icu::UnicodeString s = from_utf8(utf8);
  return static_cast<std::size_t>(s.countChar32());
}

std::vector<std::string> tokenize(std::string_view utf8) {
  std::vector<std::string> tokens;
  for (auto& run : word_runs(utf8)) {
    tokens.push_back(run.text);
    if (run.cjk.size() == 1 && run.all_cjk) continue;  // already emitted as the run
    for (auto& c : run.cjk) tokens.push_back(std::move(c));
  }
  return tokens;
}

std::vector<std::string> tokenize_query(std::string_view utf8) {
  std::vector<std::string> tokens;
  for (auto& run : word_runs(utf8)) {
    if (run.all_cjk && !run.cjk.empty()) {
      for (auto& c : run.cjk) tokens.push_back(std::move(c));
      continue;
    }
    tokens.push_back(run.text);
    for (auto& c : run.cjk) tokens.push_back(std::move(c));
  }
  return tokens;
}

bool contains_folded(std::string_view haystack, std::string_view needle) {
  const auto h = collapse(nfc_unicode(from_utf8(haystack))).foldCase();
  const auto n = collapse(nfc_unicode(from_utf8(needle))).foldCase();
  return h.indexOf(n) >= 0;
}

bool contains_excerpt(std::string_view haystack, std::string_view source,
                      std::size_t min_length) {
  const auto h = collapse(nfc_unicode(from_utf8(haystack))).foldCase();
  const auto s = collapse(nfc_unicode(from_utf8(source))).foldCase();
  if (s.isEmpty()) return false;
  const auto total = static_cast<std::size_t>(s.countChar32());
  if (total <= min_length) return h.indexOf(s) >= 0;

  // Code-unit offsets of every codepoint boundary in `s`.
  std::vector<int32_t> bounds;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) bounds.push_back(i);
  bounds.push_back(s.length());
  for (std::size_t start = 0; start + min_length <= total; ++start) {
    const int32_t from = bounds[start];
    const int32_t len = bounds[start + min_length] - from;
    if (h.indexOf(s, from, len, 0, h.length()) >= 0) return true;
  }
  return false;
}

}  // namespace gene_atlas::text

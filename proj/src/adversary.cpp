#include "msauth/adversary.hpp"

#include <fstream>
#include <sstream>

namespace msauth {

ExtractedSecrets extract_card(const SmartCard& card) {
  return ExtractedSecrets{card.c_i, card.d_i, card.e_i, card.h_y, card.b};
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Dictionary Dictionary::parse(std::istream& in) {
  std::vector<Credential> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos || tab == 0 ||
        tab + 1 == line.size()) {
      throw DictionaryFormatError("dictionary line " + std::to_string(lineno) +
                                  ": expected `id<TAB>password`");
    }
    entries.push_back({to_bytes(std::string_view(line).substr(0, tab)),
                       to_bytes(std::string_view(line).substr(tab + 1))});
  }
  return Dictionary(std::move(entries));
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DictionaryFormatError("cannot open dictionary " + path.string());
  return parse(in);
}

Dictionary Dictionary::cross_product(const std::vector<Bytes>& ids,
                                     const std::vector<Bytes>& passwords) {
  std::vector<Credential> entries;
  entries.reserve(ids.size() * passwords.size());
  for (const auto& id : ids) {
    for (const auto& pw : passwords) entries.push_back({id, pw});
  }
  return Dictionary(std::move(entries));
}

void Dictionary::write(std::ostream& out) const {
  for (const auto& e : entries_) out << to_text(e.id) << '\t' << to_text(e.password) << '\n';
}

std::vector<Bytes> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DictionaryFormatError("cannot open word list " + path.string());
  std::vector<Bytes> out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) out.push_back(to_bytes(line));
  }
  return out;
}

GuessResult guess_credentials(const ExtractedSecrets& ex, const Dictionary& dict) {
  GuessResult result;
  for (const auto& candidate : dict.entries()) {
    ++result.work;
    const Digest a_guess = user_credential(ex.b, candidate.password);
    if (hash_concat({candidate.id, ex.h_y, a_guess}) == ex.c_i) {
      result.found = candidate;
      return result;
    }
  }
  return result;
}

LoginRequest forge_login(const ExtractedSecrets& own, ByteView own_id, ByteView own_password,
                         ByteView target_sid, BlockRng& rng) {
  const Digest a_t = user_credential(own.b, own_password);
  const Digest b_t = own.d_i ^ hash_concat({own_id, a_t});
  const Digest n_i1 = random_block(rng);
  const Digest f_i = own.h_y ^ n_i1;

  LoginRequest out;
  out.m1.f_i = f_i;
  out.m1.p_ij = own.e_i ^ hash_concat({own.h_y, n_i1, target_sid});
  out.m1.cid_i = a_t ^ hash_concat({b_t, f_i, n_i1});
  out.m1.g_i = hash_concat({b_t, a_t, n_i1});
  out.session = CardSession{a_t, b_t, n_i1};
  return out;
}

M1 replay_login(const M1& captured) { return captured; }

void AdversaryKnowledge::learn_payload(ByteView payload) {
  if (payload.size() < kDigestLen) return;
  for (std::size_t off = 0; off + kDigestLen <= payload.size(); ++off) {
    known_.insert(Digest::from_bytes(payload.subspan(off, kDigestLen)));
  }
}

}  // namespace msauth

#pragma once

// Offline transcript checker. Given only a transcript, it recomputes every
// hash/XOR relation of registration and of each login session from the
// recorded payloads and simulator secrets, derives what each party must have
// concluded, and compares that with the recorded outcomes, session keys and
// attack report. The formulas are written out here a second time, apart from
// the actor code, so the two can be checked against each other.

#include <string>
#include <vector>

#include "msauth/transcript.hpp"

namespace msauth {

struct VerifyReport {
  std::vector<std::string> problems;
  std::size_t sessions_checked = 0;
  std::size_t relations_checked = 0;

  bool ok() const { return problems.empty(); }
};

VerifyReport verify_transcript(const Transcript& t);

}  // namespace msauth

// Copyright 2026 The eqinfo Authors
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

#include "eqinfo/error.hpp"

namespace eqinfo {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEmptyCorpus: return "empty corpus";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kTruncatedStream: return "truncated stream";
    case ErrorCode::kCorruptStream: return "corrupt stream";
    case ErrorCode::kCorruptWindow: return "corrupt window";
    case ErrorCode::kWindowTooSmall: return "window too small";
    case ErrorCode::kMisalignedStream: return "misaligned stream";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInsufficientData: return "insufficient data";
    case ErrorCode::kDigestMismatch: return "digest mismatch";
    case ErrorCode::kFormat: return "format";
  }
  return "unknown";
}

}  // namespace eqinfo

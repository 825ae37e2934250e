// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "css/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace css {

void CheckFinite(const AudioBuffer& buf, const std::string& what) {
  if (buf.sample_rate <= 0) {
    throw std::runtime_error(what + ": sample_rate must be positive");
  }
  for (double s : buf.samples) {
    if (!std::isfinite(s)) {
      throw std::runtime_error(what + ": non-finite sample");
    }
  }
}

namespace {

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<uint8_t>* out, uint32_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
  out->push_back((v >> 16) & 0xff);
  out->push_back((v >> 24) & 0xff);
}

void PutU16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
}

}  // namespace

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wav file: " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("not a RIFF/WAVE file: " + path);
  }

  // Chunk scan; only fmt and data are interpreted.
  size_t pos = 12;
  int channels = 0, bits = 0, sample_rate = 0, format = 0;
  const uint8_t* pcm = nullptr;
  size_t pcm_len = 0;
  while (pos + 8 <= data.size()) {
    uint32_t chunk_len = ReadU32(data.data() + pos + 4);
    if (pos + 8 + chunk_len > data.size()) {
      throw std::runtime_error("truncated wav chunk in " + path);
    }
    if (std::memcmp(data.data() + pos, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw std::runtime_error("bad fmt chunk: " + path);
      const uint8_t* f = data.data() + pos + 8;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      sample_rate = static_cast<int>(ReadU32(f + 4));
      bits = ReadU16(f + 14);
    } else if (std::memcmp(data.data() + pos, "data", 4) == 0) {
      pcm = data.data() + pos + 8;
      pcm_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }
  if (format != 1 || bits != 16) {
    throw std::runtime_error("unsupported wav format (need PCM 16-bit): " + path);
  }
  if (channels != 1) {
    throw std::runtime_error("unsupported wav channel count (need mono): " + path);
  }
  if (pcm == nullptr) throw std::runtime_error("wav has no data chunk: " + path);

  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(pcm_len / 2);
  for (size_t i = 0; i < buf.samples.size(); ++i) {
    int16_t v = static_cast<int16_t>(pcm[2 * i] | (pcm[2 * i + 1] << 8));
    buf.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return buf;
}

void WriteWav(const std::string& path, const AudioBuffer& buf) {
  CheckFinite(buf, "WriteWav");
  std::vector<uint8_t> out;
  uint32_t data_len = static_cast<uint32_t>(buf.samples.size() * 2);
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate));
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate * 2));
  PutU16(&out, 2);
  PutU16(&out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_len);
  for (double s : buf.samples) {
    double clipped = std::clamp(s, -1.0, 1.0);
    int16_t v = static_cast<int16_t>(std::lrint(clipped * 32767.0));
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!os) throw std::runtime_error("short write: " + path);
}

}  // namespace css

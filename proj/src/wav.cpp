#include "casa/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "casa/error.hpp"

namespace casa {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::string chunk_id(std::span<const std::uint8_t> b, std::size_t at) {
  return std::string(reinterpret_cast<const char*>(b.data() + at), 4);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_id(std::vector<std::uint8_t>& out, const char* id) { out.insert(out.end(), id, id + 4); }

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioSignal decode_wav(std::span<const std::uint8_t> bytes, std::optional<unsigned> channel) {
  if (bytes.size() < 12 || chunk_id(bytes, 0) != "RIFF" || chunk_id(bytes, 8) != "WAVE")
    throw FormatError("RIFF chunk: not a RIFF/WAVE file");

  std::optional<Format> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = chunk_id(bytes, pos);
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw FormatError("'" + id + "' chunk: truncated");
    if (id == "fmt ") {
      if (size < 16) throw FormatError("'fmt ' chunk: too short (" + std::to_string(size) + " bytes)");
      Format f;
      f.tag = read_u16(bytes, body);
      f.channels = read_u16(bytes, body + 2);
      f.sample_rate = read_u32(bytes, body + 4);
      f.block_align = read_u16(bytes, body + 12);
      f.bits = read_u16(bytes, body + 14);
      if (f.tag == kFormatExtensible) {
        if (size < 40) throw FormatError("'fmt ' chunk: extensible header too short");
        f.tag = read_u16(bytes, body + 24);
      }
      fmt = f;
    } else if (id == "data") {
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1u);
  }

  if (!fmt) throw FormatError("'fmt ' chunk: missing");
  if (!data) throw FormatError("'data' chunk: missing");

  const bool pcm16 = fmt->tag == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->tag == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32)
    throw FormatError("'fmt ' chunk: unsupported encoding (format tag " + std::to_string(fmt->tag) + ", " +
                      std::to_string(fmt->bits) + " bits); expected 16-bit PCM or 32-bit float");
  if (fmt->channels == 0) throw FormatError("'fmt ' chunk: zero channels");
  if (fmt->sample_rate == 0) throw FormatError("'fmt ' chunk: zero sample rate");
  const unsigned width = fmt->bits / 8;
  if (fmt->block_align != width * fmt->channels) throw FormatError("'fmt ' chunk: inconsistent block alignment");

  unsigned pick = 0;
  if (fmt->channels > 1) {
    if (!channel)
      throw FormatError("'fmt ' chunk: " + std::to_string(fmt->channels) +
                        " channels found; only mono is accepted unless a channel is selected");
    pick = *channel;
  } else if (channel && *channel != 0) {
    throw FormatError("'fmt ' chunk: channel " + std::to_string(*channel) + " requested from a mono file");
  }
  if (pick >= fmt->channels)
    throw FormatError("'fmt ' chunk: channel " + std::to_string(pick) + " out of range for " +
                      std::to_string(fmt->channels) + " channels");

  const std::size_t frames = data->size() / fmt->block_align;
  if (frames == 0) throw FormatError("'data' chunk: no sample frames");
  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = i * fmt->block_align + pick * width;
    if (pcm16) {
      samples[i] = static_cast<std::int16_t>(read_u16(*data, at)) / 32768.0;
    } else {
      const float v = std::bit_cast<float>(read_u32(*data, at));
      if (!std::isfinite(v)) throw FormatError("'data' chunk: non-finite float sample at frame " + std::to_string(i));
      samples[i] = v;
    }
  }
  return AudioSignal(std::move(samples), fmt->sample_rate);
}

AudioSignal load_audio(const std::filesystem::path& path, std::optional<unsigned> channel) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes, channel);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioSignal& signal, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::Pcm16;
  const std::uint16_t width = pcm ? 2 : 4;
  const auto data_size = static_cast<std::uint32_t>(signal.size() * width);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_id(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_id(out, "WAVE");
  put_id(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, signal.sample_rate());
  put_u32(out, signal.sample_rate() * width);
  put_u16(out, width);
  put_u16(out, static_cast<std::uint16_t>(width * 8));
  put_id(out, "data");
  put_u32(out, data_size);
  for (double x : signal.samples()) {
    if (pcm) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }
  return out;
}

void save_audio(const std::filesystem::path& path, const AudioSignal& signal, WavEncoding encoding) {
  const auto bytes = encode_wav(signal, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write audio file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

}  // namespace casa

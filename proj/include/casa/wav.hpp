#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casa/signal.hpp"

namespace casa {

enum class WavEncoding { Pcm16, Float32 };

// Decodes RIFF/WAVE with 16-bit PCM or 32-bit float samples. Integer samples
// are divided by 32768. Multichannel data needs an explicit `channel`.
AudioSignal decode_wav(std::span<const std::uint8_t> bytes, std::optional<unsigned> channel = std::nullopt);
AudioSignal load_audio(const std::filesystem::path& path, std::optional<unsigned> channel = std::nullopt);

// Mono writer. Pcm16 rounds and saturates; Float32 narrows each sample.
std::vector<std::uint8_t> encode_wav(const AudioSignal& signal, WavEncoding encoding);
void save_audio(const std::filesystem::path& path, const AudioSignal& signal, WavEncoding encoding);

}  // namespace casa

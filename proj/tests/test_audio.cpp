#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sffkit/audio.hpp"
#include "sffkit/error.hpp"
#include "sffkit/manifest.hpp"
#include "support/tmpdir.hpp"
#include "support/wav_bytes.hpp"

using testsupport::TempDir;
using testsupport::WavBuilder;
using testsupport::wav_pcm_header;

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

sffkit::errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const sffkit::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return sffkit::errc::io_failure;
}

}  // namespace

TEST_SUITE_BEGIN("audio");

TEST_CASE("16-bit mono samples scale by full-scale 32768") {
  TempDir dir("wav16");
  auto b = wav_pcm_header(1, 1, 16000, 16, 6);
  b.i16(0).i16(16384).i16(-16384);
  b.write(dir.file("a.wav"));

  const auto signal = sffkit::load_wav(dir.file("a.wav"));
  CHECK(signal.sample_rate_hz == 16000);
  REQUIRE(signal.samples.size() == 3);
  CHECK(signal.samples[0] == 0.0);
  CHECK(signal.samples[1] == 0.5);
  CHECK(signal.samples[2] == -0.5);
}

TEST_CASE("multichannel frames average to mono") {
  TempDir dir("wavst");
  // float stereo so 1.0 is exactly representable
  auto b = wav_pcm_header(3, 2, 8000, 32, 16);
  b.f32(1.0f).f32(0.0f);
  b.f32(0.5f).f32(0.5f);
  b.write(dir.file("st.wav"));

  const auto signal = sffkit::load_wav(dir.file("st.wav"));
  REQUIRE(signal.samples.size() == 2);
  CHECK(signal.samples[0] == 0.5);
  CHECK(signal.samples[1] == 0.5);
}

TEST_CASE("8, 24 and 32-bit integer decoding") {
  TempDir dir("wavdepth");

  auto b8 = wav_pcm_header(1, 1, 8000, 8, 3);
  b8.raw(128).raw(192).raw(0);
  b8.write(dir.file("d8.wav"));
  const auto s8 = sffkit::load_wav(dir.file("d8.wav"));
  REQUIRE(s8.samples.size() == 3);
  CHECK(s8.samples[0] == 0.0);
  CHECK(s8.samples[1] == 0.5);
  CHECK(s8.samples[2] == -1.0);

  auto b24 = wav_pcm_header(1, 1, 8000, 24, 6);
  b24.i24(4194304).i24(-4194304);
  b24.write(dir.file("d24.wav"));
  const auto s24 = sffkit::load_wav(dir.file("d24.wav"));
  REQUIRE(s24.samples.size() == 2);
  CHECK(s24.samples[0] == 0.5);
  CHECK(s24.samples[1] == -0.5);

  auto b32 = wav_pcm_header(1, 1, 8000, 32, 8);
  b32.u32(0x40000000u).u32(0xC0000000u);
  b32.write(dir.file("d32.wav"));
  const auto s32 = sffkit::load_wav(dir.file("d32.wav"));
  REQUIRE(s32.samples.size() == 2);
  CHECK(s32.samples[0] == 0.5);
  CHECK(s32.samples[1] == -0.5);
}

TEST_CASE("float samples clamp to [-1,1] and non-finite values become 0") {
  TempDir dir("wavf32");
  auto b = wav_pcm_header(3, 1, 16000, 32, 16);
  b.f32(0.25f).f32(2.0f).f32(-3.0f).f32(std::numeric_limits<float>::quiet_NaN());
  b.write(dir.file("f.wav"));

  const auto signal = sffkit::load_wav(dir.file("f.wav"));
  REQUIRE(signal.samples.size() == 4);
  CHECK(signal.samples[0] == 0.25);
  CHECK(signal.samples[1] == 1.0);
  CHECK(signal.samples[2] == -1.0);
  CHECK(signal.samples[3] == 0.0);
}

TEST_CASE("extensible header resolves the real format from the GUID") {
  TempDir dir("wavext");
  WavBuilder b;
  b.tag("RIFF").u32(4 + 8 + 40 + 8 + 4).tag("WAVE");
  b.tag("fmt ").u32(40);
  b.u16(0xFFFE).u16(1).u32(16000);
  b.u32(32000).u16(2).u16(16);
  b.u16(22);  // cbSize
  b.u16(16);  // valid bits
  b.u32(0);   // channel mask
  b.u16(0x0001);  // PCM subformat, first two GUID bytes
  for (int i = 0; i < 14; ++i) b.raw(0);
  b.tag("data").u32(4);
  b.i16(16384).i16(-16384);
  b.write(dir.file("ext.wav"));

  const auto signal = sffkit::load_wav(dir.file("ext.wav"));
  REQUIRE(signal.samples.size() == 2);
  CHECK(signal.samples[0] == 0.5);
  CHECK(signal.samples[1] == -0.5);
}

TEST_CASE("chunk walking honors word alignment and skips unknown chunks") {
  TempDir dir("wavpad");
  WavBuilder b;
  b.tag("RIFF").u32(4 + 8 + 3 + 1 + 8 + 16 + 8 + 2).tag("WAVE");
  b.tag("LIST").u32(3);
  b.raw(1).raw(2).raw(3).raw(0);  // odd chunk + pad byte
  b.tag("fmt ").u32(16);
  b.u16(1).u16(1).u32(8000).u32(16000).u16(2).u16(16);
  b.tag("data").u32(2);
  b.i16(16384);
  b.write(dir.file("p.wav"));

  const auto signal = sffkit::load_wav(dir.file("p.wav"));
  REQUIRE(signal.samples.size() == 1);
  CHECK(signal.samples[0] == 0.5);
}

TEST_CASE("distinct error values for missing, malformed and unsupported files") {
  TempDir dir("waverr");

  CHECK(code_of([&] { (void)sffkit::load_wav(dir.file("absent.wav")); }) ==
        sffkit::errc::file_not_found);

  write_text(dir.file("junk.wav"), "this is not audio at all, not even close");
  CHECK(code_of([&] { (void)sffkit::load_wav(dir.file("junk.wav")); }) ==
        sffkit::errc::malformed_wav);

  auto truncated = wav_pcm_header(1, 1, 8000, 16, 100);  // claims 100 data bytes
  truncated.i16(0);
  truncated.write(dir.file("trunc.wav"));
  CHECK(code_of([&] { (void)sffkit::load_wav(dir.file("trunc.wav")); }) ==
        sffkit::errc::malformed_wav);

  auto mp3ish = wav_pcm_header(0x0055, 1, 8000, 16, 2);
  mp3ish.i16(0);
  mp3ish.write(dir.file("mp3.wav"));
  CHECK(code_of([&] { (void)sffkit::load_wav(dir.file("mp3.wav")); }) ==
        sffkit::errc::unsupported_wav_encoding);
}

TEST_CASE("sine round-trip error stays under half an LSB") {
  TempDir dir("wavrt");
  sffkit::SignalBuffer signal;
  signal.sample_rate_hz = 16000;
  signal.samples.resize(16000);
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    signal.samples[i] =
        0.9 * std::sin(2.0 * 3.141592653589793 * 440.0 * static_cast<double>(i) / 16000.0);
  }
  sffkit::write_wav(dir.file("sine.wav"), signal);
  const auto back = sffkit::load_wav(dir.file("sine.wav"));

  REQUIRE(back.samples.size() == signal.samples.size());
  CHECK(back.sample_rate_hz == 16000);
  double max_err = 0.0;
  for (std::size_t i = 0; i < back.samples.size(); ++i) {
    max_err = std::max(max_err, std::abs(back.samples[i] - signal.samples[i]));
  }
  CHECK(max_err <= std::pow(2.0, -15.0));
}

TEST_CASE("manifest happy path preserves order and tokens") {
  TempDir dir("mani");
  write_text(dir.file("m.csv"),
             "audio_path,speaker_id,class_label,task,utterance_id\n"
             "a.wav,spk1,healthy,vowel,u1\n"
             "b.wav,spk2,2,read_text,u2\n"
             "\"c d.wav\",\"spk,3\",mild,sentence,u3\n");

  const auto manifest = sffkit::load_manifest(dir.file("m.csv"));
  REQUIRE(manifest.entries.size() == 3);
  CHECK(manifest.entries[0].speaker_id == "spk1");
  CHECK(manifest.entries[0].class_label == sffkit::ClassLabel::healthy);
  CHECK(manifest.entries[0].task == sffkit::Task::vowel);
  CHECK(manifest.entries[1].class_label == sffkit::ClassLabel::severe);
  CHECK(manifest.entries[1].task == sffkit::Task::read_text);
  CHECK(manifest.entries[2].audio_path == "c d.wav");
  CHECK(manifest.entries[2].speaker_id == "spk,3");
  CHECK(manifest.resolve_audio_path(manifest.entries[0]) == dir.file("a.wav"));
}

TEST_CASE("manifest accepts CRLF line endings") {
  TempDir dir("manicrlf");
  write_text(dir.file("m.csv"),
             "audio_path,speaker_id,class_label,task,utterance_id\r\n"
             "a.wav,spk1,healthy,vowel,u1\r\n");
  const auto manifest = sffkit::load_manifest(dir.file("m.csv"));
  REQUIRE(manifest.entries.size() == 1);
  CHECK(manifest.entries[0].utterance_id == "u1");
}

TEST_CASE("manifest rejects bad headers, tokens and duplicate keys") {
  TempDir dir("manierr");

  write_text(dir.file("hdr.csv"), "path,speaker,class,task,utt\na.wav,s,0,vowel,u\n");
  CHECK(code_of([&] { (void)sffkit::load_manifest(dir.file("hdr.csv")); }) ==
        sffkit::errc::manifest_parse);

  write_text(dir.file("tok.csv"),
             "audio_path,speaker_id,class_label,task,utterance_id\n"
             "a.wav,s1,moderate,vowel,u1\n");
  try {
    (void)sffkit::load_manifest(dir.file("tok.csv"));
    FAIL("expected unknown class label error");
  } catch (const sffkit::Error& e) {
    CHECK(e.code() == sffkit::errc::manifest_parse);
    CHECK(std::string(e.what()).find("unknown class label") != std::string::npos);
  }

  write_text(dir.file("dup.csv"),
             "audio_path,speaker_id,class_label,task,utterance_id\n"
             "a.wav,s1,healthy,vowel,u1\n"
             "b.wav,s1,healthy,sentence,u1\n");
  CHECK(code_of([&] { (void)sffkit::load_manifest(dir.file("dup.csv")); }) ==
        sffkit::errc::manifest_duplicate_utterance);

  write_text(dir.file("conf.csv"),
             "audio_path,speaker_id,class_label,task,utterance_id\n"
             "a.wav,s1,healthy,vowel,u1\n"
             "b.wav,s1,severe,vowel,u2\n");
  CHECK(code_of([&] { (void)sffkit::load_manifest(dir.file("conf.csv")); }) ==
        sffkit::errc::manifest_conflicting_class);

  CHECK(code_of([&] { (void)sffkit::load_manifest(dir.file("absent.csv")); }) ==
        sffkit::errc::file_not_found);
}

TEST_CASE("check_balance counts each speaker once") {
  sffkit::CorpusManifest manifest;
  const auto add = [&](const std::string& spk, sffkit::ClassLabel c, const std::string& utt) {
    sffkit::ManifestEntry e;
    e.audio_path = utt + ".wav";
    e.speaker_id = spk;
    e.class_label = c;
    e.task = sffkit::Task::vowel;
    e.utterance_id = utt;
    manifest.entries.push_back(e);
  };

  SUBCASE("balanced corpus") {
    for (int c = 0; c < 3; ++c) {
      for (int s = 0; s < 20; ++s) {
        const auto spk = "c" + std::to_string(c) + "s" + std::to_string(s);
        add(spk, static_cast<sffkit::ClassLabel>(c), spk + "_u0");
        add(spk, static_cast<sffkit::ClassLabel>(c), spk + "_u1");  // second utterance
      }
    }
    const auto report = sffkit::check_balance(manifest);
    CHECK(report.speakers_per_class == std::array<int, 3>{20, 20, 20});
    CHECK(report.balanced);
  }

  SUBCASE("unbalanced corpus") {
    for (int s = 0; s < 50; ++s) add("h" + std::to_string(s), sffkit::ClassLabel::healthy, "u");
    for (int s = 0; s < 25; ++s) add("m" + std::to_string(s), sffkit::ClassLabel::mild, "u");
    for (int s = 0; s < 25; ++s) add("v" + std::to_string(s), sffkit::ClassLabel::severe, "u");
    const auto report = sffkit::check_balance(manifest);
    CHECK(report.speakers_per_class == std::array<int, 3>{50, 25, 25});
    CHECK_FALSE(report.balanced);
  }

  SUBCASE("empty manifest is vacuously balanced") {
    const auto report = sffkit::check_balance(manifest);
    CHECK(report.speakers_per_class == std::array<int, 3>{0, 0, 0});
    CHECK(report.balanced);
  }
}

TEST_CASE("filter_by_task selects matching entries only") {
  sffkit::CorpusManifest manifest;
  for (int i = 0; i < 6; ++i) {
    sffkit::ManifestEntry e;
    e.speaker_id = "s" + std::to_string(i);
    e.task = static_cast<sffkit::Task>(i % 3);
    e.utterance_id = "u" + std::to_string(i);
    manifest.entries.push_back(e);
  }
  const auto vowels = sffkit::filter_by_task(manifest, sffkit::Task::vowel);
  REQUIRE(vowels.size() == 2);
  for (const auto& e : vowels) CHECK(e.task == sffkit::Task::vowel);
  CHECK(sffkit::filter_by_task(manifest, std::nullopt).size() == 6);
}

TEST_SUITE_END();

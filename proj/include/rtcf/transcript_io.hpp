#pragma once

// JSON-lines persistence: one transcript per line, secrets included so the file can be rescored.

#include "rtcf/codec.hpp"
#include "rtcf/protocol_q.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rtcf {

/// Raised for unreadable lines; `line` is 1-based.
struct TranscriptError : std::runtime_error
{
    TranscriptError(std::size_t line, const std::string& what);
    std::size_t line;
};

json transcript_to_json(const Transcript& t, const Params& params);
/// Returns the transcript together with the parameter set it was recorded under.
std::pair<Transcript, Params> transcript_from_json(const json& j);

void write_transcripts(std::ostream& out, const std::vector<Transcript>& ts, const Params& params);
void append_transcript(std::ostream& out, const Transcript& t, const Params& params);

struct LoadedTranscript
{
    Transcript transcript;
    Params params;
    std::size_t line;
};

/// Blank lines are skipped. Throws TranscriptError on the first malformed line.
std::vector<LoadedTranscript> read_transcripts(std::istream& in);
std::vector<LoadedTranscript> load_transcripts(const std::filesystem::path& path);
void save_transcripts(const std::filesystem::path& path, const std::vector<Transcript>& ts, const Params& params);

struct RescoreSummary
{
    std::size_t total = 0;
    /// 1-based line numbers whose stored d or success flag disagrees with recomputation.
    std::vector<std::size_t> mismatched_lines;
};

RescoreSummary rescore_all(const std::vector<LoadedTranscript>& ts);

}  // namespace rtcf

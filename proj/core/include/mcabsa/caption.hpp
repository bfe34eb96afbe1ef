#pragma once

#include <string>
#include <vector>

#include "mcabsa/dialogue.hpp"
#include "mcabsa/errors.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa {

struct CaptionFailure {
    int utterance_id = 0;
    AttachmentKind kind = AttachmentKind::audio;
    std::string message;
};

/// Aggregate of per-attachment captioning failures.
class CaptionError : public Error {
public:
    explicit CaptionError(std::vector<CaptionFailure> failures);
    const std::vector<CaptionFailure>& failures() const { return failures_; }

private:
    static std::string format(const std::vector<CaptionFailure>& failures);
    std::vector<CaptionFailure> failures_;
};

struct CaptionStages {
    StageClient audio;   // transcription role
    StageClient visual;  // image/video description role
};

/// Captions a single uncaptioned attachment. The prompt carries the plain
/// transcript (without captions, so concurrent captioning stays
/// order-independent) and the attachment URI; retries bump sample_index so
/// each attempt is a distinct request. Throws EmptyCaption when every
/// attempt comes back blank.
std::string caption_attachment(const Dialogue& dialogue, int utterance_id,
                               const Attachment& attachment, const StageClient& backend);

/// Returns a copy of the dialogue in which every attachment carries a
/// caption; existing captions are preserved and cost no backend calls.
/// Per-attachment failures are aggregated into one CaptionError.
Dialogue embed_captions(const Dialogue& dialogue, const CaptionStages& stages);

}  // namespace mcabsa

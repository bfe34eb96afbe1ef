#include "mcabsa/caption.hpp"

#include <sstream>

namespace mcabsa {

CaptionError::CaptionError(std::vector<CaptionFailure> failures)
    : Error(format(failures)), failures_(std::move(failures)) {}

std::string CaptionError::format(const std::vector<CaptionFailure>& failures) {
    std::ostringstream out;
    out << failures.size() << " attachment(s) failed to caption:";
    for (const CaptionFailure& f : failures) {
        out << " (u" << f.utterance_id << ' ' << to_string(f.kind) << ": " << f.message << ')';
    }
    return out.str();
}

namespace {

std::string trimmed(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string caption_attachment(const Dialogue& dialogue, int utterance_id,
                               const Attachment& attachment, const StageClient& backend) {
    if (attachment.caption) {
        throw std::invalid_argument("attachment already has a caption");
    }
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, /*include_captions=*/false)},
        {"attachment_uri", attachment.uri},
    };
    const std::string scope = dialogue.doc_id + "#u" + std::to_string(utterance_id) + "#" +
                              to_string(attachment.kind);

    const int attempts = std::max(1, backend.retries);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::string caption = trimmed(backend.call(scope, vars, attempt).text);
        if (!caption.empty()) return caption;
    }
    throw EmptyCaption("backend returned empty text for " + scope + " after " +
                       std::to_string(attempts) + " attempts");
}

Dialogue embed_captions(const Dialogue& dialogue, const CaptionStages& stages) {
    Dialogue out = dialogue;
    std::vector<CaptionFailure> failures;
    for (Utterance& u : out.utterances) {
        for (Attachment& a : u.attachments) {
            if (a.caption) continue;
            const StageClient& stage =
                a.kind == AttachmentKind::audio ? stages.audio : stages.visual;
            try {
                a.caption = caption_attachment(dialogue, u.utterance_id, a, stage);
            } catch (const Error& e) {
                failures.push_back({u.utterance_id, a.kind, e.what()});
            }
        }
    }
    if (!failures.empty()) throw CaptionError(std::move(failures));
    return out;
}

}  // namespace mcabsa

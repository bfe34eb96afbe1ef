#include <doctest.h>

#include "mcabsa/caption.hpp"
#include "test_support.hpp"

using namespace mcabsa;
using namespace mcabsa::testing;

namespace {

Dialogue dialogue_with(std::vector<Attachment> attachments) {
    Dialogue d = two_turn_dialogue();
    d.utterances[1].attachments = std::move(attachments);
    return d;
}

CaptionStages stages_for(ChatBackend* backend, int retries = 3) {
    return CaptionStages{
        make_stage(backend, "caption_audio", "transcribe {attachment_uri}\n{transcript}", retries),
        make_stage(backend, "caption_visual", "describe {attachment_uri}\n{transcript}", retries),
    };
}

}  // namespace

TEST_SUITE("caption") {

TEST_CASE("captions pass the backend text through") {
    auto backend = counting_scripted({
        {"caption_audio#d1#u1#audio:0", "I love this phone"},
        {"caption_visual#d1#u1#image:0", "a cracked phone screen"},
    });
    Dialogue d = dialogue_with({{AttachmentKind::audio, "aud://1", std::nullopt},
                                {AttachmentKind::image, "img://1", std::nullopt}});
    CaptionStages stages = stages_for(backend.get());

    CHECK(caption_attachment(d, 1, d.utterances[1].attachments[0], stages.audio) ==
          "I love this phone");
    CHECK(caption_attachment(d, 1, d.utterances[1].attachments[1], stages.visual) ==
          "a cracked phone screen");
}

TEST_CASE("persistently empty output raises EmptyCaption") {
    auto backend = counting_scripted({
        {"caption_audio#d1#u1#audio:0", ""},
        {"caption_audio#d1#u1#audio:1", "  "},
        {"caption_audio#d1#u1#audio:2", ""},
    });
    Dialogue d = dialogue_with({{AttachmentKind::audio, "aud://1", std::nullopt}});
    CaptionStages stages = stages_for(backend.get());
    CHECK_THROWS_AS(caption_attachment(d, 1, d.utterances[1].attachments[0], stages.audio),
                    EmptyCaption);
    CHECK(backend->calls == 3);
}

TEST_CASE("empty first sample can recover on retry") {
    auto backend = counting_scripted({
        {"caption_visual#d1#u1#video:0", ""},
        {"caption_visual#d1#u1#video:1", "a product demo"},
    });
    Dialogue d = dialogue_with({{AttachmentKind::video, "vid://1", std::nullopt}});
    CaptionStages stages = stages_for(backend.get());
    CHECK(caption_attachment(d, 1, d.utterances[1].attachments[0], stages.visual) ==
          "a product demo");
    CHECK(backend->calls == 2);
}

TEST_CASE("embed_captions without attachments is the identity with zero calls") {
    auto backend = counting_scripted({});
    Dialogue d = two_turn_dialogue();
    Dialogue out = embed_captions(d, stages_for(backend.get()));
    CHECK(out == d);
    CHECK(backend->calls == 0);
}

TEST_CASE("embed_captions fills only missing captions") {
    auto backend = counting_scripted({{"caption_visual#d1#u1#video:0", "a demo clip"}});
    Dialogue d = dialogue_with({{AttachmentKind::audio, "aud://1", "already transcribed"},
                                {AttachmentKind::video, "vid://1", std::nullopt}});
    Dialogue out = embed_captions(d, stages_for(backend.get()));
    CHECK(backend->calls == 1);
    CHECK(out.utterances[1].attachments[0].caption == "already transcribed");
    CHECK(out.utterances[1].attachments[1].caption == "a demo clip");
    // source dialogue is untouched
    CHECK(d.utterances[1].attachments[1].caption == std::nullopt);
}

TEST_CASE("embed_captions is idempotent") {
    auto backend = counting_scripted({{"caption_visual#d1#u1#image:0", "a red phone"}});
    Dialogue d = dialogue_with({{AttachmentKind::image, "img://1", std::nullopt}});
    CaptionStages stages = stages_for(backend.get());
    Dialogue once = embed_captions(d, stages);
    CHECK(backend->calls == 1);
    Dialogue twice = embed_captions(once, stages);
    CHECK(backend->calls == 1);
    CHECK(twice == once);
}

TEST_CASE("utterance text and order never change") {
    auto backend = counting_scripted({{"caption_visual#d1#u1#image:0", "a red phone"}});
    Dialogue d = dialogue_with({{AttachmentKind::image, "img://1", std::nullopt}});
    Dialogue out = embed_captions(d, stages_for(backend.get()));
    REQUIRE(out.utterances.size() == d.utterances.size());
    for (size_t i = 0; i < d.utterances.size(); ++i) {
        CHECK(out.utterances[i].utterance_id == d.utterances[i].utterance_id);
        CHECK(out.utterances[i].text == d.utterances[i].text);
        CHECK(out.utterances[i].speaker == d.utterances[i].speaker);
    }
}

TEST_CASE("failures aggregate per attachment") {
    auto backend = counting_scripted({{"caption_visual#d1#u1#image:0", "fine"}});
    Dialogue d = dialogue_with({{AttachmentKind::image, "img://1", std::nullopt},
                                {AttachmentKind::video, "vid://1", std::nullopt}});
    try {
        embed_captions(d, stages_for(backend.get()));
        FAIL("expected CaptionError");
    } catch (const CaptionError& e) {
        REQUIRE(e.failures().size() == 1);
        CHECK(e.failures()[0].utterance_id == 1);
        CHECK(e.failures()[0].kind == AttachmentKind::video);
    }
}

TEST_CASE("caption prompt embeds the plain transcript") {
    std::string seen_prompt;
    class Probe : public ChatBackend {
    public:
        explicit Probe(std::string* sink) : sink_(sink) {}
        const std::string& name() const override { return name_; }
        ChatResponse complete(const ChatRequest& req) override {
            *sink_ = req.messages.back().content;
            return {"a caption", false};
        }

    private:
        std::string name_ = "probe";
        std::string* sink_;
    } probe(&seen_prompt);

    Dialogue d = dialogue_with({{AttachmentKind::image, "img://1", std::nullopt}});
    CaptionStages stages = stages_for(&probe);
    caption_attachment(d, 1, d.utterances[1].attachments[0], stages.visual);
    CHECK(seen_prompt.find("img://1") != std::string::npos);
    CHECK(seen_prompt.find("#0 Ana: I love this phone") != std::string::npos);
    // the caption prompt renders without caption lines
    CHECK(seen_prompt.find("[image caption:") == std::string::npos);
}

}  // TEST_SUITE

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topro.corpus import PANX_TAGS, UDPOS_TAGS, LabeledSentence
from topro.errors import IndexOutOfRange, MissingTags, TemplateError, UnknownTask, VerbalizerError
from topro.pvp import (
    MASK,
    MASK_LITERAL,
    SENTENCE,
    TOKEN,
    Duplicate,
    MultiPiece,
    PromptTemplate,
    Verbalizer,
    builtin_pvp,
    decompose,
    icl_candidate_words,
    load_pvp_override,
    pvp_from_dict,
    pvp_to_dict,
    render_icl_prompt,
    render_prompt,
    render_seq2seq_topro,
    render_seq2seq_vanilla,
    validate_verbalizer,
)

WORKS = LabeledSentence("en.x.0", "en", ["Works", "as", "stated", "!"], ["VERB", "ADP", "VERB", "PUNCT"])
COOL = LabeledSentence(
    "en.x.1",
    "en",
    "On the other hand , it looks pretty cool .".split(),
    ["ADP", "DET", "ADJ", "NOUN", "PUNCT", "PRON", "VERB", "ADV", "ADJ", "PUNCT"],
)


def test_udpos_prompt_text():
    template, _ = builtin_pvp("udpos")
    p = render_prompt(template, WORKS, 0)
    assert p.text == "Works as stated ! The pos tag of Works is a kind of: [MASK]."
    assert (p.sentence_id, p.token_index, p.gold_tag) == ("en.x.0", 0, "VERB")


def test_panx_prompt_text():
    template, _ = builtin_pvp("panx")
    s = LabeledSentence("en.y.0", "en", ["Jim", "lives", "in", "Paris"], ["B-PER", "O", "O", "B-LOC"])
    assert render_prompt(template, s, 3).text == (
        "Jim lives in Paris The named entity of Paris is a kind of: [MASK]."
    )


def test_index_out_of_range():
    template, _ = builtin_pvp("udpos")
    with pytest.raises(IndexOutOfRange):
        render_prompt(template, WORKS, 4)
    with pytest.raises(IndexOutOfRange):
        render_prompt(template, WORKS, -1)


def test_decompose_count_and_order():
    template, _ = builtin_pvp("udpos")
    prompts = decompose(template, WORKS)
    assert [p.token_index for p in prompts] == [0, 1, 2, 3]
    assert all(p.text.count(MASK_LITERAL) == 1 for p in prompts)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.text(alphabet="abcxyz", min_size=1, max_size=5), min_size=1, max_size=30))
def test_decompose_law(tokens):
    template, _ = builtin_pvp("panx")
    s = LabeledSentence("s", "en", tokens, None)
    prompts = decompose(template, s)
    assert len(prompts) == len(tokens)
    for i, p in enumerate(prompts):
        assert p.text.startswith(s.text + " ")
        assert p.text.count(MASK_LITERAL) == 1
        assert p.gold_tag is None


def test_truncation_keeps_target_and_drops_farthest():
    template, _ = builtin_pvp("udpos")
    s = LabeledSentence("s", "en", [f"t{i}" for i in range(20)], None)
    # the template adds 10 whitespace words, leaving room for 3 context tokens
    p = render_prompt(template, s, 2, max_length=13)
    assert p.text == "t1 t2 t3 The pos tag of t2 is a kind of: [MASK]."
    # equidistant neighbours: the right one goes first
    p = render_prompt(template, s, 10, max_length=12)
    assert p.text.startswith("t9 t10 The pos")
    # the target survives even when nothing else fits
    p = render_prompt(template, s, 7, max_length=1)
    assert p.text.startswith("t7 The pos tag of t7 ")


def test_template_validation():
    with pytest.raises(TemplateError):
        PromptTemplate("bad", (SENTENCE, TOKEN), "masked")
    with pytest.raises(TemplateError):
        PromptTemplate("bad", (SENTENCE, MASK, MASK, TOKEN), "masked")
    with pytest.raises(TemplateError):
        PromptTemplate("bad", (SENTENCE, TOKEN, MASK), "seq2seq")
    t = PromptTemplate("ok", (SENTENCE, " / ", TOKEN, " = ", MASK), "masked")
    assert PromptTemplate.from_dict(t.to_dict()) == t


def test_verbalizers_are_bijective_and_ordered():
    for task, tagset in (("panx", PANX_TAGS), ("udpos", UDPOS_TAGS)):
        _, v = builtin_pvp(task)
        assert v.labels == tagset.labels
        assert len(set(v.words)) == len(v.words)
        for tag in tagset.labels:
            assert v.tag(v.word(tag)) == tag
    _, panx = builtin_pvp("panx")
    assert panx.word("B-LOC") == "location" and panx.word("I-PER") == "name"
    _, udpos = builtin_pvp("udpos")
    assert udpos.word("AUX") == "auxiliar" and udpos.word("PUNCT") == "punct"


def test_verbalizer_rejects_bad_words():
    with pytest.raises(VerbalizerError):
        Verbalizer({"A": "x", "B": "x"})
    with pytest.raises(VerbalizerError):
        Verbalizer({"A": "two words"})
    with pytest.raises(VerbalizerError):
        Verbalizer({"O": "other"}, PANX_TAGS)


def test_validate_verbalizer():
    probe = lambda w: 2 if w == "auxiliar" else 1  # noqa: E731
    issues = validate_verbalizer(builtin_pvp("udpos")[1], probe)
    assert issues == [MultiPiece("auxiliar", 2)]
    issues = validate_verbalizer({"A": "w", "B": "w"}, lambda w: 1)
    assert issues == [Duplicate("w", ("A", "B"))]


def test_unknown_task():
    with pytest.raises(UnknownTask):
        builtin_pvp("srl")
    with pytest.raises(UnknownTask):
        render_seq2seq_topro(WORKS, 0, "srl")


def test_seq2seq_formats():
    text, target = render_seq2seq_topro(COOL, 0, "udpos")
    assert text == "On the other hand , it looks pretty cool . The pos tag of On is:"
    assert target == "ADP"
    inp, tgt = render_seq2seq_vanilla(COOL, "udpos")
    assert inp == "POS tagging: On the other hand , it looks pretty cool ."
    assert tgt.startswith("ADP: On $$ DET: the $$ ADJ: other $$ NOUN: hand $$ PUNCT: ,")
    assert tgt.count(" $$ ") == len(COOL.tokens) - 1
    with pytest.raises(MissingTags):
        render_seq2seq_vanilla(LabeledSentence("u", "en", ["a"]), "panx")


def test_icl_prompt():
    _, v = builtin_pvp("panx")
    assert icl_candidate_words(v, PANX_TAGS) == [
        "location", "organisation", "person", "place", "body", "name", "other"
    ]
    s = LabeledSentence("s", "en", ["Jim", "runs"], ["B-PER", "O"])
    assert render_icl_prompt(s, 0, v) == (
        "Named entity type: location organisation person place body name other\n"
        "Sentence: Jim runs\n"
        "Named entity type of Jim in the sentence is"
    )


def test_pvp_override_and_round_trip(tmp_path):
    path = tmp_path / "pvp.yaml"
    path.write_text("verbalizer:\n  O: none\ntemplate.segments: ['{SENTENCE}', ' | ', '{TOKEN}', ' -> ', '{MASK}']\n")
    template, v = load_pvp_override(path, "panx")
    assert v.word("O") == "none" and v.word("B-LOC") == "location"
    assert template.fill("a b", "a") == "a b | a -> [MASK]"
    assert pvp_from_dict(pvp_to_dict(template, v)) == (template, v)
    with pytest.raises(VerbalizerError):
        load_pvp_override({"verbalizer": {"B-MISC": "misc"}}, "panx")

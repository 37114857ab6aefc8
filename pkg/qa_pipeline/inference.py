"""Inference
============
The final prompt puts the verbalized evidence under the question, and the
chosen letter is read back out of the model's reasoning.
"""
import re

from evidence_sampler import Kind
from llm_gateway import RequestSettings, templates

template = templates(__file__)

ANSWER_IS = re.compile(r'(?i:answer\s+is)\s*:?\s*\(?([A-Z])(?![A-Za-z])')
OPTION = re.compile(r'\((?i:option)\s*([A-Z])\)')
LINE_INITIAL = re.compile(r'^\s*([A-Z])\.', re.MULTILINE)


def evidence_block(kind, sentences):
    """Return ``###<label> 1: ...`` lines, or '' without sentences."""
    lines = ['{} {}: {}'.format(kind.label, number, sentence) for number, sentence in enumerate(sentences, 1)]
    return '###' + '\n'.join(lines) if lines else ''


def build_inference_prompt(sample, path_sentences=(), neighbor_sentences=(), settings=RequestSettings()):
    """Return the ``inference`` request for `sample`. Without evidence this is
    the plain chain-of-thought prompt.
    """
    blocks = [block for block in (evidence_block(Kind.PATH, path_sentences),
                                  evidence_block(Kind.NEIGHBOR, neighbor_sentences)) if block]
    evidence = '{}\n'.format(template('evidence').format(blocks='\n'.join(blocks))) if blocks else ''
    prompt = template('inference').format(question=sample.question, options=sample.render_options(),
                                          evidence=evidence)
    return settings.request(prompt, 'inference')


def last_legal(pattern, text, letters):
    found = [m.group(1) for m in pattern.finditer(text) if m.group(1) in letters]
    return found[-1] if found else None


def extract_answer(text, letters):
    """Return the option letter a reply settles on, or None. In order of
    precedence: the last "answer is X", the last "(option X)", the last line
    starting "X.". Only `letters` count.
    """
    for pattern in (ANSWER_IS, OPTION, LINE_INITIAL):
        letter = last_legal(pattern, text, letters)
        if letter:
            return letter
    return None

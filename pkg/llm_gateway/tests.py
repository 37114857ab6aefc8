"""Test LLM Gateway
===================
"""
import os
import tempfile
import threading
import time
from unittest import TestCase

from errors import InputError
from llm_gateway import (BatchAborted, CacheMiss, ExchangeStore, Gateway, Live, LlmExchange, LlmRequest,
                         PromptTemplate, Provider, RateLimited, Record, Replay, RequestSettings, Scripted,
                         Tracer, TransportError, UnscriptedPrompt, open_gateway)
from testing import StubProvider, fixture


def request(prompt='Judge this. Please answer yes or no.', **kwargs):
    return LlmRequest('test-model', prompt, **kwargs)


class TestLlmRequest(TestCase):
    """Test :class:`.LlmRequest` cache keys."""

    def test_identical(self):
        """Identical requests have identical keys."""
        self.assertEqual(request().cache_key, request().cache_key)
        self.assertEqual(len(request().cache_key), 64)

    def test_temperature(self):
        """Temperature is part of the key."""
        self.assertNotEqual(request().cache_key, request(temperature=0.0).cache_key)

    def test_tag_not_in_key(self):
        """The stage tag is not part of the key."""
        self.assertEqual(request(tag='judge').cache_key, request(tag='inference').cache_key)

    def test_int_temperature(self):
        """1 and 1.0 are the same temperature."""
        self.assertEqual(request(temperature=1).cache_key, request(temperature=1.0).cache_key)

    def test_canonical(self):
        """The canonical form has sorted keys."""
        canonical = request().canonical()
        self.assertTrue(canonical.startswith('{"max_tokens":'))

    def test_default_temperature(self):
        """Sampling temperature defaults to 0.7."""
        self.assertEqual(request().temperature, 0.7)

    def test_invalid(self):
        """Empty prompts and out of range temperatures are rejected."""
        self.assertRaises(InputError, request, '')
        self.assertRaises(InputError, request, temperature=2.5)
        self.assertRaises(InputError, request, max_tokens=0)

    def test_settings(self):
        """Settings make tagged requests."""
        made = RequestSettings(model='m', temperature=0.2).request('p', 'judge')
        self.assertEqual((made.model, made.temperature, made.tag), ('m', 0.2, 'judge'))


class TestScripted(TestCase):
    """Test the :class:`.Scripted` provider."""

    def setUp(self):
        self.provider = Scripted([('answer yes or no', 'Yes'), ('answer', 'Other')])

    def test_match(self):
        """A prompt containing a pattern gets its response."""
        self.assertEqual(self.provider.complete(request()), 'Yes')

    def test_first_match_wins(self):
        """Rules are tried in order."""
        self.assertEqual(self.provider.complete(request('What is the answer?')), 'Other')

    def test_unmatched(self):
        """An unmatched prompt is an error, never a default."""
        with self.assertRaises(UnscriptedPrompt):
            self.provider.complete(request('Hello'))

    def test_from_file(self):
        """Rules load from JSON."""
        provider = Scripted.from_file(fixture('minicorpus_pairwise.json'))
        self.assertEqual(len(provider.rules), 4)

    def test_registered(self):
        """Providers are found by name."""
        self.assertIs(Provider['scripted'], Scripted)
        self.assertIs(Provider['replay'], Replay)
        self.assertIn('live', Provider)


class TestExchangeStore(TestCase):
    """Test :class:`.ExchangeStore` and record/replay."""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, 'cache.jsonl')

    def tearDown(self):
        self.directory.cleanup()

    def test_replay_empty(self):
        """Replay on an empty store is a CacheMiss."""
        gateway = Gateway(Replay(ExchangeStore(self.path)))
        with self.assertRaises(CacheMiss) as context:
            gateway.complete(request())
        self.assertEqual(context.exception.cache_key, request().cache_key)

    def test_record_then_replay(self):
        """Recorded exchanges are replayed from a fresh store."""
        recorder = Gateway(Record(Scripted([('yes or no', 'Yes')]), ExchangeStore(self.path)))
        self.assertEqual(recorder.complete(request()), 'Yes')
        replayer = Gateway(Replay(ExchangeStore(self.path)))
        self.assertEqual(replayer.complete(request(tag='other')), 'Yes')

    def test_first_record_wins(self):
        """A key is written once."""
        store = ExchangeStore(self.path)
        self.assertTrue(store.append(LlmExchange(request(), 'first', 'scripted')))
        self.assertFalse(store.append(LlmExchange(request(), 'second', 'scripted')))
        with open(self.path, 'a', encoding='utf-8') as fp:
            fp.write(LlmExchange(request(), 'third', 'scripted').to_json() + '\n')
        self.assertEqual(ExchangeStore(self.path).get(request().cache_key).response_text, 'first')

    def test_round_trip(self):
        """Exchanges survive the JSON line format."""
        exchange = LlmExchange(request(system_prompt='Be brief.', tag='judge'), 'Yes', 'live')
        self.assertEqual(LlmExchange.from_json(exchange.to_json()), exchange)

    def test_bad_line(self):
        """A corrupt store is an input error."""
        with open(self.path, 'w', encoding='utf-8') as fp:
            fp.write('{not json\n')
        self.assertRaises(InputError, ExchangeStore, self.path)

    def test_open_gateway(self):
        """Scripted mode with a cache records, replay mode serves it."""
        script = fixture('minicorpus_pairwise.json')
        prompt = "Answer: Let's think step by step:"
        self.assertEqual(open_gateway('scripted', script=script, cache=self.path).complete(request(prompt)),
                         'The abstract states the relation directly. So the answer is: A.')
        replayed = open_gateway('replay', cache=self.path).complete(request(prompt))
        self.assertTrue(replayed.endswith('A.'))

    def test_open_gateway_errors(self):
        """Modes need their files."""
        self.assertRaises(InputError, open_gateway, 'replay')
        self.assertRaises(InputError, open_gateway, 'scripted')
        self.assertRaises(InputError, open_gateway, 'psychic')
        self.assertRaises(InputError, open_gateway, 'record', 'http://localhost')

    def test_open_gateway_providers(self):
        """Each mode opens the provider registered under its name."""
        script = fixture('minicorpus_pairwise.json')
        self.assertIsInstance(open_gateway('scripted', script=script).provider, Scripted)
        self.assertIsInstance(open_gateway('LIVE', 'http://localhost').provider, Live)
        recorder = open_gateway('record', 'http://localhost', cache=self.path).provider
        self.assertIsInstance(recorder, Record)
        self.assertIsInstance(recorder.inner, Live)


class CountingProvider(Provider):
    """Answers after a pause, counting peak concurrency."""

    def __init__(self, delay=0.01, fail_on=None):
        self.delay, self.fail_on = delay, fail_on
        self.active = self.peak = 0
        self.order = []
        self.lock = threading.Lock()

    def complete(self, request):
        with self.lock:
            self.active += 1
            self.peak = max(self.peak, self.active)
            self.order.append(('start', request.user_prompt))
        time.sleep(self.delay)
        with self.lock:
            self.active -= 1
            self.order.append(('end', request.user_prompt))
        if request.user_prompt == self.fail_on:
            raise CacheMiss(request.cache_key)
        return request.user_prompt.upper()


class TestBatch(TestCase):
    """Test :meth:`.Gateway.complete_batch`."""

    def setUp(self):
        self.requests = [request('prompt {}'.format(i)) for i in range(10)]

    def test_order(self):
        """10 requests with L=2 come back in order."""
        provider = CountingProvider()
        results = Gateway(provider, concurrency=2).complete_batch(self.requests)
        self.assertEqual(results, ['PROMPT {}'.format(i) for i in range(10)])
        self.assertLessEqual(provider.peak, 2)

    def test_sequential(self):
        """With L=1 each completion ends before the next starts."""
        provider = CountingProvider()
        Gateway(provider, concurrency=1).complete_batch(self.requests)
        self.assertEqual(provider.peak, 1)
        self.assertEqual([kind for kind, _ in provider.order], ['start', 'end'] * 10)

    def test_nested(self):
        """The limit holds across nested batches."""
        provider = CountingProvider()
        gateway = Gateway(provider, concurrency=3)
        threads = [threading.Thread(target=gateway.complete_batch, args=(self.requests,)) for _ in range(3)]
        [t.start() for t in threads]
        [t.join() for t in threads]
        self.assertLessEqual(provider.peak, 3)

    def test_abort(self):
        """A CacheMiss aborts the batch with its index and partial results."""
        provider = CountingProvider(fail_on='prompt 4')
        with self.assertRaises(BatchAborted) as context:
            Gateway(provider, concurrency=2).complete_batch(self.requests)
        self.assertEqual(context.exception.index, 4)
        self.assertIsInstance(context.exception.cause, CacheMiss)
        self.assertEqual(context.exception.partial[:4], ['PROMPT 0', 'PROMPT 1', 'PROMPT 2', 'PROMPT 3'])
        self.assertIsNone(context.exception.partial[4])
        self.assertEqual(len(context.exception.partial), 10)

    def test_tracer(self):
        """The tracer records one key per call."""
        tracer = Tracer(Gateway(CountingProvider(delay=0)))
        tracer.complete(self.requests[0])
        tracer.complete_batch(self.requests[1:3])
        self.assertEqual(tracer.keys, [r.cache_key for r in self.requests[:3]])


class TestLive(TestCase):
    """Test :class:`.Live` against the stub server."""

    def tearDown(self):
        self.stub.stop()
        os.environ.pop('DALK_API_KEY', None)

    def live(self, **kwargs):
        self.base_url = self.stub.start()
        return Live(self.base_url, timeout=5, backoff=0, **kwargs)

    def test_complete(self):
        """The reply content is returned and the bearer token is sent."""
        os.environ['DALK_API_KEY'] = 'secret'
        self.stub = StubProvider(reply='Yes', token='secret')
        self.assertEqual(self.live().complete(request(system_prompt='Be brief.')), 'Yes')
        body = self.stub.received[0]
        self.assertEqual(body['model'], 'test-model')
        self.assertEqual(body['temperature'], 0.7)
        self.assertEqual([m['role'] for m in body['messages']], ['system', 'user'])

    def test_retry(self):
        """429 and 5xx are retried."""
        self.stub = StubProvider(reply='Yes', failures=[429, 502])
        self.assertEqual(self.live().complete(request()), 'Yes')
        self.assertEqual(len(self.stub.received), 3)

    def test_rate_limited(self):
        """RateLimited surfaces after three attempts."""
        self.stub = StubProvider(failures=[429, 429, 429])
        with self.assertRaises(RateLimited):
            self.live().complete(request())
        self.assertEqual(len(self.stub.received), 3)

    def test_client_error(self):
        """Other error statuses are not retried."""
        self.stub = StubProvider(token='secret')
        with self.assertRaises(TransportError) as context:
            self.live().complete(request())
        self.assertEqual(context.exception.status, 401)

    def test_unreachable(self):
        """A closed port is a TransportError."""
        self.stub = StubProvider()
        live = self.live(attempts=1)
        self.stub.stop()
        with self.assertRaises(TransportError):
            live.complete(request())


class TestPromptTemplate(TestCase):
    """Test :class:`.PromptTemplate`."""

    def test_format(self):
        """Placeholders are substituted, other braces left alone."""
        template = PromptTemplate('t', 'Question: {question}\n{not a placeholder}')
        self.assertEqual(template.format(question='Why?'), 'Question: Why?\n{not a placeholder}')
        self.assertEqual(template.placeholders, ['question'])

    def test_missing(self):
        """A missing field is an input error."""
        self.assertRaises(InputError, PromptTemplate('t', '{question}').format)

    def test_override(self):
        """Files in the override directory win."""
        with tempfile.TemporaryDirectory() as directory:
            with open(os.path.join(directory, 'judge.txt'), 'w', encoding='utf-8') as fp:
                fp.write('Override {question}\n')
            PromptTemplate.override_dir = directory
            try:
                self.assertEqual(PromptTemplate.load('/nonexistent', 'judge').format(question='Q'), 'Override Q')
            finally:
                PromptTemplate.override_dir = None
        self.assertRaises(InputError, PromptTemplate.load, '/nonexistent', 'judge')

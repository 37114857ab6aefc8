"""Stub Provider Server
=======================
A `Werkzeug`_ WSGI application speaking the chat-completion and embeddings
wire protocol on localhost, so live providers are tested over real HTTP.

.. _Werkzeug: http://werkzeug.pocoo.org/
"""
import json
import threading

from werkzeug.exceptions import HTTPException, Unauthorized
from werkzeug.routing import Map, Rule
from werkzeug.serving import make_server
from werkzeug.wrappers import Request, Response

JSON = 'application/json'
"""Content-Type for JSON documents."""


class StubProvider:
    """Replies `reply` to every chat completion after first answering with
    each status in `failures`. Embeddings are ``[len(text), 1, 0, ...]``.
    Every decoded request body is kept in `received`.
    """

    url_map = Map([
        Rule('/v1/chat/completions', endpoint='chat', methods=['POST']),
        Rule('/v1/embeddings', endpoint='embeddings', methods=['POST']),
    ])

    def __init__(self, reply='Yes', failures=(), token=None, dimension=4):
        self.reply = reply
        self.failures = list(failures)
        self.token = token
        self.dimension = dimension
        self.received = []
        self.server = None

    def __call__(self, environ, start_response):
        return self.wsgi_app(environ, start_response)

    def wsgi_app(self, environ, start_response):
        """Dispatch on the url map, converting HTTP exceptions to responses."""
        request = Request(environ)
        urls = self.url_map.bind_to_environ(environ)
        try:
            endpoint, args = urls.match()
            if self.token and request.headers.get('Authorization') != 'Bearer {}'.format(self.token):
                raise Unauthorized()
            response = getattr(self, 'on_' + endpoint)(request.get_json(), **args)
        except HTTPException as exception:
            response = exception
        return response(environ, start_response)

    def failure(self):
        if self.failures:
            return Response(json.dumps({'error': 'stub failure'}), status=self.failures.pop(0), mimetype=JSON)

    def on_chat(self, body):
        self.received.append(body)
        return self.failure() or Response(json.dumps(
            {'choices': [{'index': 0, 'message': {'role': 'assistant', 'content': self.reply}}]}), mimetype=JSON)

    def on_embeddings(self, body):
        self.received.append(body)
        vectors = [[float(len(text)), 1.0] + [0.0] * (self.dimension - 2) for text in body['input']]
        return self.failure() or Response(json.dumps(
            {'data': [{'index': i, 'embedding': v} for i, v in enumerate(vectors)]}), mimetype=JSON)

    def start(self):
        """Serve on a free localhost port in a daemon thread; return the base URL."""
        self.server = make_server('127.0.0.1', 0, self, threaded=True)
        threading.Thread(target=self.server.serve_forever, daemon=True).start()
        return 'http://127.0.0.1:{}/v1'.format(self.server.server_port)

    def stop(self):
        if self.server:
            self.server.shutdown()
            self.server.server_close()
            self.server = None

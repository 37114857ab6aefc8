from setuptools import setup

setup(name='dalk',
      version='0.1',
      description='Knowledge graph augmented question answering over an evolving literature graph',
      python_requires='>=3.8',
      packages=[
          'application',
          'bench_harness',
          'cli',
          'corpus',
          'embed_link',
          'errors',
          'evidence_sampler',
          'kg_construct',
          'kg_store',
          'llm_gateway',
          'qa_pipeline',
          'registered',
          'self_retrieval',
          'testing',
      ],
      package_data={
          'bench_harness': ['prompts/*.txt'],
          'evidence_sampler': ['prompts/*.txt'],
          'kg_construct': ['prompts/*.txt'],
          'qa_pipeline': ['prompts/*.txt'],
          'self_retrieval': ['prompts/*.txt'],
          'testing': ['data/*'],
      },
      install_requires=[
          'networkx>=2.5',
          'numpy>=1.19',
          'requests>=2.25',
          'tomli>=1.1; python_version < "3.11"',
      ],
      extras_require={
          'docs': ['sphinx'],
          'tests': ['werkzeug>=2.0'],
      },
      )
